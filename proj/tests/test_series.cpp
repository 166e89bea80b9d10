#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "asjet/series.hpp"

using namespace asjet;

namespace {

Field f2(2, 1);
Field f3(3, 1);
Field f4(2, 2, std::vector<uint32_t>{1, 1, 1});

LaurentSeries make(const Field& f, int val, std::vector<uint64_t> digits,
                   int prec = kPrecInf) {
    std::vector<FieldElement> coeffs;
    for (uint64_t d : digits) coeffs.push_back(f.from_int(d));
    return LaurentSeries(&f, val, std::move(coeffs), prec);
}

// coefficients equal wherever both sides are certified
void check_agree(const LaurentSeries& a, const LaurentSeries& b) {
    int hi = std::min(a.prec(), b.prec());
    int lo = std::min(a.val(), b.val());
    if (hi >= kPrecInf) hi = std::max(a.stored_end(), b.stored_end());
    for (int k = lo; k < hi; ++k) CHECK(a.coeff(k) == b.coeff(k));
}

LaurentSeries random_series(const Field& f, std::mt19937_64& rng, int val_lo, int len,
                            int prec_extra) {
    std::vector<FieldElement> coeffs;
    for (int i = 0; i < len; ++i) coeffs.push_back(f.random_element(rng));
    int val = val_lo + int(rng() % 4);
    return LaurentSeries(&f, val, std::move(coeffs), val + len + int(rng() % uint64_t(prec_extra)));
}

}  // namespace

TEST_CASE("addition with precision propagation") {
    // (t^-1 + 1) + t^-1 = 1 over F_2
    auto s = make(f2, -1, {1, 1});
    auto t = make(f2, -1, {1});
    auto sum = s + t;
    CHECK(sum.val() == 0);
    CHECK(sum.coeff(0).is_one());
    CHECK(sum.prec() == kPrecInf);

    auto s5 = make(f2, -1, {1, 1}, 5);
    auto t7 = make(f2, -1, {1}, 7);
    CHECK((s5 + t7).prec() == 5);
}

TEST_CASE("multiplication") {
    auto a = make(f2, -2, {1});
    auto b = make(f2, 3, {1});
    auto prod = a * b;
    CHECK(prod.val() == 1);
    CHECK(prod.coeff(1).is_one());

    // zero-to-precision times a series stays zero with the propagated precision
    auto z = LaurentSeries::zero(&f2, 4);
    auto s = make(f2, -1, {1, 1});
    auto zs = z * s;
    CHECK(zs.is_zero());
    CHECK(zs.prec() == 3);  // min(4 + (-1), inf + 4)
}

TEST_CASE("inversion") {
    // geometric series over F_2
    auto s = make(f2, 0, {1, 1}, 5);
    auto inv = ls_invert(s);
    CHECK(inv.prec() == 5);
    for (int k = 0; k < 5; ++k) CHECK(inv.coeff(k).is_one());
    auto prod = s * inv;
    CHECK(prod.val() == 0);
    CHECK(prod.coeff(0).is_one());
    for (int k = 1; k < prod.prec(); ++k) CHECK(prod.coeff(k).is_zero());

    // exact monomial
    Field& f = f4;
    FieldElement g = f.generator();
    auto mono = LaurentSeries::monomial(&f, -3, g);
    auto minv = ls_invert(mono);
    CHECK(minv.val() == 3);
    CHECK(minv.coeff(3) == g.inverse());
    CHECK(minv.prec() == kPrecInf);

    CHECK_THROWS_AS(ls_invert(LaurentSeries::zero(&f2)), DomainError);
    CHECK_THROWS_AS(ls_invert(LaurentSeries::zero(&f2, 3)), PrecisionError);
    CHECK_THROWS_AS(ls_invert(make(f2, 0, {1, 1})), PrecisionError);  // exact non-monomial
}

TEST_CASE("powers") {
    // Frobenius: (1+u)^2 = 1 + u^2 over F_2
    auto s = make(f2, 0, {1, 1});
    auto sq = ls_pow(s, 2);
    CHECK(sq.coeff(0).is_one());
    CHECK(sq.coeff(1).is_zero());
    CHECK(sq.coeff(2).is_one());

    auto sp = make(f2, 0, {1, 1}, 9);
    CHECK(ls_pow(sp, -1) == ls_invert(sp));

    // (1+u)^-1 over F_3, four terms: 1 + 2u + u^2 + 2u^3
    auto t = make(f3, 0, {1, 1}, 4);
    auto tinv = ls_pow(t, -1);
    CHECK(tinv.coeff(0) == f3.from_int(1));
    CHECK(tinv.coeff(1) == f3.from_int(2));
    CHECK(tinv.coeff(2) == f3.from_int(1));
    CHECK(tinv.coeff(3) == f3.from_int(2));
    // independent check: the product is 1 mod u^4
    auto prod = t * tinv;
    CHECK(prod.coeff(0).is_one());
    for (int k = 1; k < prod.prec(); ++k) CHECK(prod.coeff(k).is_zero());

    CHECK(ls_pow(LaurentSeries::zero(&f2, 2), 0).coeff(0).is_one());
    CHECK_THROWS_AS(ls_pow(LaurentSeries::zero(&f2), -1), DomainError);
}

TEST_CASE("pow of a zero-to-precision series scales the precision") {
    auto z = LaurentSeries::zero(&f2, 3);
    auto zk = ls_pow(z, 4);
    CHECK(zk.is_zero());
    CHECK(zk.prec() == 12);
}

TEST_CASE("substitution") {
    // identity substitution
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        auto s = random_series(f4, rng, -3, 5, 4);
        auto t = LaurentSeries::variable(&f4);
        CHECK(ls_substitute(s, t) == s);
    }

    // t^-1 at u -> u^-1
    auto pole = make(f2, -1, {1});
    CHECK(ls_substitute(pole, LaurentSeries::variable(&f2)) ==
          make(f2, -1, {1}));

    // t^-1 at beta u^r -> beta^-1 u^-r
    FieldElement g = f4.generator();
    auto pole4 = LaurentSeries::monomial(&f4, -1, f4.one());
    auto mono = LaurentSeries::monomial(&f4, 3, g);
    auto sub = ls_substitute(pole4, mono);
    CHECK(sub.val() == -3);
    CHECK(sub.coeff(-3) == g.inverse());

    CHECK_THROWS_AS(ls_substitute(pole, make(f2, 0, {1, 1})), DomainError);
}

TEST_CASE("substitution cross-checked against explicit expansion") {
    // s = t^-2 + t^-1 composed with g = u + u^2 over F_2
    auto s = make(f2, -2, {1, 1});
    auto g = make(f2, 1, {1, 1}, 8);
    auto lhs = ls_substitute(s, g);
    auto inv = ls_invert(g);
    auto rhs = inv * inv + inv;
    check_agree(lhs, rhs);
    // frozen values: u^-2 + u^-1 + u + u^3 (within precision 5)
    CHECK(lhs.coeff(-2).is_one());
    CHECK(lhs.coeff(-1).is_one());
    CHECK(lhs.coeff(0).is_zero());
    CHECK(lhs.coeff(1).is_one());
    CHECK(lhs.coeff(2).is_zero());
    CHECK(lhs.coeff(3).is_one());
    CHECK(lhs.coeff(4).is_zero());
    CHECK(lhs.prec() >= 5);
}

TEST_CASE("precision soundness: refining inputs never changes certified output") {
    auto s = make(f2, -2, {1, 1});
    auto g_lo = make(f2, 1, {1, 1}, 6);
    auto g_hi = make(f2, 1, {1, 1}, 12);
    auto lo = ls_substitute(s, g_lo);
    auto hi = ls_substitute(s, g_hi);
    CHECK(hi.prec() >= lo.prec());
    for (int k = lo.val(); k < lo.prec(); ++k) CHECK(lo.coeff(k) == hi.coeff(k));
}

TEST_CASE("ring axioms on random series") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        auto a = random_series(f4, rng, -2, 4, 5);
        auto b = random_series(f4, rng, -2, 4, 5);
        auto c = random_series(f4, rng, -2, 4, 5);
        check_agree((a + b) + c, a + (b + c));
        check_agree((a * b) * c, a * (b * c));
        check_agree(a * (b + c), a * b + a * c);
        check_agree(a * b, b * a);
    }
}

TEST_CASE("p-th power is the coefficientwise Frobenius with spread exponents") {
    std::mt19937_64 rng(23);
    Field f8(2, 3, std::vector<uint32_t>{1, 1, 0, 1});
    for (const Field* f : {&f4, &f8}) {
        const int p = int(f->p());
        for (int i = 0; i < 20; ++i) {
            auto s = random_series(*f, rng, -2, 4, 5);
            auto sp = ls_pow(s, p);
            for (int k = sp.val(); k < sp.prec(); ++k) {
                if (k % p != 0) {
                    CHECK(sp.coeff(k).is_zero());
                } else if (k / p >= s.val() && k / p < s.prec()) {
                    CHECK(sp.coeff(k) == s.coeff(k / p).frobenius(1));
                }
            }
        }
    }
}

TEST_CASE("coefficients beyond the precision fail loudly") {
    auto s = make(f2, 0, {1}, 3);
    CHECK_THROWS_AS(s.coeff(3), PrecisionError);
    CHECK(s.coeff(2).is_zero());
    CHECK(s.coeff(-5).is_zero());
}

TEST_CASE("series text form round trips") {
    auto s = make(f4, -2, {1, 2, 0, 3}, 4);
    auto back = LaurentSeries::parse(&f4, s.str());
    CHECK(back == s);
    CHECK(LaurentSeries::parse(&f2, "2:5:1,0,1") ==
          make(f2, 2, {1, 0, 1}, 5));
}

TEST_CASE("bivariate slices") {
    FieldElement g = f4.generator();
    auto a = BivariateLaurent::exact(
        &f4, {{0, 0, f4.one()}, {0, 2, g}, {1, 1, f4.one()}, {2, 0, g * g}});
    auto slice = a.slice_t_zero();
    CHECK(slice.coeff(0).is_one());
    CHECK(slice.coeff(1).is_zero());
    CHECK(slice.coeff(2) == g);

    auto mono = BivariateLaurent::exact(&f4, {{1, 2, f4.one()}});
    CHECK(mono.slice_t_zero().is_zero());

    // direct coefficient filtering as the oracle
    std::mt19937_64 rng(5);
    std::vector<BivTerm> terms;
    for (int i = 0; i < 12; ++i)
        terms.push_back({int(rng() % 4), int(rng() % 4), f4.random_element(rng)});
    auto b = BivariateLaurent::exact(&f4, terms);
    auto su = b.slice_u_zero();
    for (int i = 0; i < 6; ++i) CHECK(su.coeff(i) == b.coeff(i, 0));

    auto with_pole = BivariateLaurent::exact(&f4, {{-1, 0, f4.one()}});
    CHECK_THROWS_AS(with_pole.slice_t_zero(), DomainError);
}

TEST_CASE("bivariate precision regions") {
    // knowledge: i < 3 and j < 4, tails floored at (-1, -1)
    BivariateLaurent a(&f2, {{-1, -1, f2.one()}, {0, 2, f2.one()}}, 3, 4, -1, -1);
    CHECK(a.coeff(-1, -1).is_one());
    CHECK(a.coeff(2, 3).is_zero());
    CHECK_THROWS_AS(a.coeff(3, 0), PrecisionError);
    CHECK_THROWS_AS(a.coeff(0, 4), PrecisionError);
    CHECK(a.v1() == -1);
    CHECK(a.v2() == -1);

    CHECK_THROWS_AS(
        BivariateLaurent(&f2, {{5, 0, f2.one()}}, 3, 4, -1, -1), DomainError);

    // unknown tail deeper than the stored pole: valuation is uncertain
    BivariateLaurent weak(&f2, {{-1, 0, f2.one()}}, 2, 2, -3, 0);
    CHECK_THROWS_AS(weak.v1(), PrecisionError);
}

TEST_CASE("bivariate substitution") {
    // a = T^-1 is independent of U
    auto a = BivariateLaurent::exact(&f2, {{-1, 0, f2.one()}});
    auto img = a.substitute_u(make(f2, 1, {1, 1}, 4));
    CHECK(img.val() == -1);
    CHECK(img.coeff(-1).is_one());

    // a = T U^-2 with T := g(u)
    auto b = BivariateLaurent::exact(&f2, {{1, -2, f2.one()}});
    auto img2 = b.substitute_t(make(f2, 2, {1}, 6));
    CHECK(img2.val() == 0);
    CHECK(img2.coeff(0).is_one());
}
