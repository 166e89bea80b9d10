#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "asjet/asympt.hpp"
#include "test_util.hpp"

using namespace asjet;
using namespace asjet::testutil;

TEST_CASE("pivot index") {
    auto f = f4();
    CHECK(pivot_index(cover_of(f, {{-1, 0, 1}})) == 0);
    CHECK(pivot_index(cover_of(f, {{-1, 2, 2}})) == 2);  // theta_00 = theta_01 = 0
    CHECK(pivot_index(cover_of(f, {{-1, 0, 2}, {-1, 2, 1}})) == 0);
    // p | m: the pivot needs j != n mod p
    CHECK(pivot_index(cover_of(f, {{-2, 1, 1}})) == 1);
    CHECK(pivot_index(cover_of(f, {{-2, -1, 1}}, 2)) == 0);  // n = 1, j = 0 qualifies
    CHECK_THROWS_AS(pivot_index(CoverSpec::raw(f, biv(f, {{-1, 0, 1}}), 1)),
                    DomainError);
}

TEST_CASE("minimality of m for the p|m pivot cover, by exhaustive shift search") {
    // a = T^-2 U over F_2: no wp-shift with small support reduces the T-pole
    auto f = f2();
    auto a = biv(f, {{-2, 1, 1}});
    // d ranges over all F_2 combinations on exponents {-1,0} x {0,1,2}
    std::vector<std::pair<int, int>> slots = {{-1, 0}, {-1, 1}, {-1, 2},
                                              {0, 0},  {0, 1},  {0, 2}};
    for (uint64_t mask = 0; mask < 64; ++mask) {
        std::vector<BivTerm> dt;
        for (size_t b = 0; b < slots.size(); ++b)
            if (mask & (1u << b))
                dt.push_back({slots[b].first, slots[b].second, f->one()});
        if (dt.empty()) continue;
        auto d_elt = BivariateLaurent::exact(f.get(), dt);
        auto moved = a.add(d_elt.pth_power_termwise()).add(d_elt.negate());
        if (moved.is_zero()) continue;
        CHECK(moved.v1() <= -2);
    }
}

TEST_CASE("closed forms for the worked cover a = T^-1, p = 2") {
    auto f = f4();
    auto cov = cover_of(f, {{-1, 0, 1}});
    auto g3 = generic_jump(cov, 3);
    CHECK(g3.h_r == 3);
    CHECK(g3.case_kind == GenericCase::PrimeToMNoDiv);
    CHECK(g3.method == GenericMethod::ClosedForm);
    auto g4 = generic_jump(cov, 4);
    CHECK(g4.h_r == 3);
    CHECK(g4.case_kind == GenericCase::PrimeToMDiv);
    // exhaustive maximum agrees
    CHECK(generic_jump_sampled(cov, 4, 0, 0, true) == 3);
    CHECK(generic_jump_sampled(cov, 3, 0, 0, true) == 3);
}

TEST_CASE("witnesses are returned verified") {
    auto f = f4();
    auto cov = cover_of(f, {{-1, 0, 1}});
    for (int r : {2, 3, 4, 5}) {
        auto rep = generic_jump(cov, r);
        REQUIRE(rep.witness.has_value());
        CHECK(jump_on_curve(cov, *rep.witness).h == rep.h_r);
    }
    // p | m case
    auto cov2 = cover_of(f, {{-2, 1, 1}});
    for (int r : {2, 3}) {
        auto rep = generic_jump(cov2, r);
        CHECK(rep.case_kind == GenericCase::PDividesM);
        CHECK(rep.h_r == 2 * r - 1);
        REQUIRE(rep.witness.has_value());
        CHECK(jump_on_curve(cov2, *rep.witness).h == rep.h_r);
    }
}

TEST_CASE("closed form equals the exhaustive maximum on small covers") {
    auto f = f4();
    std::vector<std::pair<CoverSpec, int>> cases;
    cases.emplace_back(cover_of(f, {{-1, 0, 1}, {-1, 1, 2}}), 1);
    cases.emplace_back(cover_of(f, {{-1, 2, 1}}), 1);  // j = 2
    cases.emplace_back(cover_of(f, {{-1, -1, 1}}, 2), 2);
    cases.emplace_back(cover_of(f, {{-2, -1, 3}, {-1, -1, 1}}, 2), 2);
    auto f9_ = f9();
    cases.emplace_back(cover_of(f9_, {{-1, 0, 1}, {-1, 1, 4}}), 1);
    for (auto& [cov, dummy] : cases) {
        int j = pivot_index(cov);
        for (int r = std::max(1, j) + 1; r * cov.m() + cov.n() <= 6; ++r) {
            auto rep = generic_jump(cov, r);
            CHECK(rep.method == GenericMethod::ClosedForm);
            CHECK(rep.h_r == generic_jump_sampled(cov, r, 0, 0, true));
        }
        (void)dummy;
    }
}

TEST_CASE("sampled lower bounds stay within the a-priori ceiling") {
    auto f = f4();
    auto cov = cover_of(f, {{-2, -1, 1}, {-1, 0, 2}}, 2);
    for (int r : {1, 2, 3}) {
        int lower = generic_jump_sampled(cov, r, 200, 7);
        CHECK(lower <= r * cov.m() + cov.n());
    }
}

TEST_CASE("below the closed-form range the fallbacks label their method") {
    auto f = f4();
    auto cov = cover_of(f, {{-1, 2, 1}});  // j = 2: r = 1, 2 are out of range
    CHECK_THROWS_AS(generic_jump(cov, 2), DomainError);
    GenericOptions ex;
    ex.fallback = GenericOptions::Fallback::Exhaustive;
    auto rep = generic_jump(cov, 2, ex);
    CHECK(rep.method == GenericMethod::Exhaustive);
    CHECK(rep.case_kind == GenericCase::None);
    REQUIRE(rep.witness.has_value());
    CHECK(jump_on_curve(cov, *rep.witness).h == rep.h_r);
    GenericOptions sm;
    sm.fallback = GenericOptions::Fallback::Sampled;
    sm.trials = 100;
    sm.seed = 3;
    auto rep2 = generic_jump(cov, 2, sm);
    CHECK(rep2.method == GenericMethod::SampledLowerBound);
    CHECK(rep2.h_r <= rep.h_r);
}

TEST_CASE("asymptotic slope for the worked example") {
    auto f = f4();
    auto cov = cover_of(f, {{-1, 0, 1}});
    auto rep = asymptotic_slope(cov, 8);
    CHECK(rep.limit == 1);
    CHECK(rep.envelope_ok);
    REQUIRE(rep.rows.size() == 8);
    for (const auto& row : rep.rows) {
        int expect = row.r % 2 == 1 ? row.r : row.r - 1;
        CHECK(row.h == expect);
        // slope in lowest terms
        CHECK(std::gcd(row.num, row.den) == 1);
        CHECK(row.num * row.r == int64_t(row.h) * row.den);
    }
    CHECK(rep.rows[0].method == GenericMethod::Exhaustive);
    CHECK(rep.rows[3].method == GenericMethod::ClosedForm);
}

TEST_CASE("slope limit is m for d = 2 covers") {
    auto f = f4();
    auto cov = cover_of(f, {{-1, -1, 1}}, 2);
    auto rep = asymptotic_slope(cov, 6);
    CHECK(rep.limit == 1);
    CHECK(rep.envelope_ok);
    // h_r = r+1 when p does not divide r+1, else r
    for (const auto& row : rep.rows) {
        if (row.r < 2) continue;
        int expect = (row.r + 1) % 2 != 0 ? row.r + 1 : row.r;
        CHECK(row.h == expect);
    }

    auto cov2 = cover_of(f, {{-2, -1, 1}}, 2);  // m = 2
    auto rep2 = asymptotic_slope(cov2, 3);
    CHECK(rep2.limit == 2);
    for (const auto& row : rep2.rows)
        if (row.r > 1) CHECK(row.h == 2 * row.r + 1);  // rm+n-j with j=0
}
