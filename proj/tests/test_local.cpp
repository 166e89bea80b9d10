#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "asjet/local.hpp"

using namespace asjet;

namespace {

Field f2(2, 1);
Field f4(2, 2, std::vector<uint32_t>{1, 1, 1});
Field f3(3, 1);

LaurentSeries make(const Field& f, int val, std::vector<uint64_t> digits,
                   int prec = kPrecInf) {
    std::vector<FieldElement> coeffs;
    for (uint64_t d : digits) coeffs.push_back(f.from_int(d));
    return LaurentSeries(&f, val, std::move(coeffs), prec);
}

// Pole part of a after one wp-shift by d: a + d^p - d, nonnegative exponents
// dropped.  Deepest surviving pole, or 0.
int shifted_pole_depth(const LaurentSeries& a, const LaurentSeries& d) {
    const Field* f = a.field();
    auto dp = ls_pow(d, int64_t(f->p()));
    auto moved = a + dp - d;
    int depth = 0;
    for (int k = moved.val(); k < 0; ++k)
        if (!moved.coeff(k).is_zero()) {
            depth = -k;
            break;
        }
    return depth;
}

// Exhaustive wp-shift oracle: minimum pole depth over all shifts by
// d = sum_{1<=s<=S} c_s t^{-s}, coefficients ranging over the whole field.
int orbit_min_pole(const LaurentSeries& a, int S) {
    const Field* f = a.field();
    uint64_t q = f->order();
    uint64_t total = 1;
    for (int i = 0; i < S; ++i) total *= q;
    int best = a.val() < 0 ? -a.val() : 0;
    for (uint64_t rank = 0; rank < total; ++rank) {
        uint64_t rest = rank;
        std::vector<FieldElement> coeffs;
        for (int s = 0; s < S; ++s) {
            coeffs.push_back(f->element_at(rest % q));
            rest /= q;
        }
        LaurentSeries d(f, -S, std::vector<FieldElement>(coeffs.rbegin(), coeffs.rend()));
        best = std::min(best, shifted_pole_depth(a, d));
        if (best == 0) break;
    }
    return best;
}

}  // namespace

TEST_CASE("already reduced forms stay put") {
    auto red = as_reduce(make(f2, -3, {1}));
    CHECK(red.terms.size() == 1);
    CHECK(red.terms.at(3).is_one());
    CHECK(red.max_jump() == 3);
}

TEST_CASE("one Frobenius fold: t^-2 over F_2") {
    auto red = as_reduce(make(f2, -2, {1}));
    CHECK(red.terms.size() == 1);
    CHECK(red.terms.at(1).is_one());
    CHECK(as_jump(make(f2, -2, {1})) == 1);
}

TEST_CASE("t^-4 + t^-3 over F_2 matches the exhaustive shift oracle") {
    auto a = make(f2, -4, {1, 1});
    CHECK(as_jump(a) == 3);
    CHECK(orbit_min_pole(a, 2) == 3);
    // also over F_4 where more shift coefficients are available
    auto a4 = LaurentSeries(&f4, -4, {f4.one(), f4.one()});
    CHECK(as_jump(a4) == 3);
    auto oracle4 = orbit_min_pole(a4, 2);
    CHECK(oracle4 == 3);
}

TEST_CASE("reduction agrees with the shift oracle over small fields") {
    // exhaustive over F_2 with pole depth <= 4
    for (uint64_t mask = 0; mask < 16; ++mask) {
        std::vector<FieldElement> coeffs;
        for (int b = 3; b >= 0; --b) coeffs.push_back(f2.from_int((mask >> b) & 1));
        auto a = LaurentSeries(&f2, -4, std::move(coeffs));
        CHECK(as_jump(a) == orbit_min_pole(a, 2));
    }
    // sampled over F_4 with pole depth <= 4
    std::mt19937_64 rng(9);
    for (int i = 0; i < 25; ++i) {
        std::vector<FieldElement> coeffs;
        for (int k = 0; k < 4; ++k) coeffs.push_back(f4.random_element(rng));
        auto a = LaurentSeries(&f4, -4, std::move(coeffs));
        CHECK(as_jump(a) == orbit_min_pole(a, 2));
    }
}

TEST_CASE("unramified inputs have jump zero") {
    CHECK(as_jump(make(f2, 0, {1, 1})) == 0);
    CHECK(as_jump(make(f2, 2, {1})) == 0);
    CHECK(as_jump(LaurentSeries::zero(&f2)) == 0);
}

TEST_CASE("single prime-to-p monomials keep their depth") {
    for (const Field* f : {(const Field*)&f2, (const Field*)&f4}) {
        for (int l : {1, 3, 5, 7}) {
            auto a = LaurentSeries::monomial(f, -l, f->one());
            CHECK(as_jump(a) == l);
        }
    }
    auto a3 = LaurentSeries::monomial(&f3, -5, f3.from_int(2));
    CHECK(as_jump(a3) == 5);
    CHECK(as_jump(LaurentSeries::monomial(&f3, -3, f3.one())) == 1);
}

TEST_CASE("wp-shift invariance of the jump") {
    // exhaustive over F_2: all a with pole <= 6, all d with pole <= 3
    for (uint64_t am = 0; am < 64; ++am) {
        std::vector<FieldElement> ac;
        for (int b = 5; b >= 0; --b) ac.push_back(f2.from_int((am >> b) & 1));
        auto a = LaurentSeries(&f2, -6, std::move(ac));
        int h = as_jump(a);
        for (uint64_t dm = 0; dm < 8; ++dm) {
            std::vector<FieldElement> dc;
            for (int b = 2; b >= 0; --b) dc.push_back(f2.from_int((dm >> b) & 1));
            auto d = LaurentSeries(&f2, -3, std::move(dc));
            auto moved = a + ls_pow(d, 2) - d;
            CHECK(as_jump(moved) == h);
        }
    }
}

TEST_CASE("integral perturbations never change the jump") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        std::vector<FieldElement> ac;
        for (int k = 0; k < 5; ++k) ac.push_back(f4.random_element(rng));
        auto a = LaurentSeries(&f4, -5, std::move(ac));
        std::vector<FieldElement> zc;
        for (int k = 0; k < 4; ++k) zc.push_back(f4.random_element(rng));
        auto z = LaurentSeries(&f4, int(rng() % 3), std::move(zc));
        CHECK(as_jump(a + z) == as_jump(a));
    }
}

TEST_CASE("reduction is idempotent") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 40; ++i) {
        std::vector<FieldElement> ac;
        for (int k = 0; k < 6; ++k) ac.push_back(f4.random_element(rng));
        auto a = LaurentSeries(&f4, -6, std::move(ac));
        auto red = as_reduce(a);
        std::vector<FieldElement> back(8, f4.zero());
        for (auto& [l, c] : red.terms) back[size_t(8 - l)] = c;
        auto again = as_reduce(LaurentSeries(&f4, -8, std::move(back)));
        CHECK(again.terms == red.terms);
        for (auto& [l, c] : red.terms) {
            CHECK(l % 2 != 0);
            CHECK(l >= 1);
            CHECK(!c.is_zero());
        }
    }
}

TEST_CASE("insufficient precision is rejected") {
    CHECK_THROWS_AS(as_reduce(make(f2, -3, {1}, -1)), PrecisionError);
    CHECK_NOTHROW(as_reduce(make(f2, -3, {1, 1, 1}, 0)));
}
