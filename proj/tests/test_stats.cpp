#include <catch_amalgamated.hpp>

#include <cdam/rng.hpp>
#include <cdam/stats.hpp>

#include <cmath>

using namespace cdam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("descriptive statistics")
{
    std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
    CHECK(mean(v) == 5.0);
    CHECK_THAT(stddev(v), WithinAbs(std::sqrt(32.0 / 7.0), 1e-15));
    CHECK_THAT(sem(v), WithinAbs(std::sqrt(32.0 / 7.0) / std::sqrt(8.0), 1e-15));
}

TEST_CASE("one-way anova on shifted groups")
{
    AnovaResult r = one_way_anova({{1, 2, 3}, {2, 3, 4}, {3, 4, 5}});
    CHECK_THAT(r.f, WithinAbs(3.0, 1e-12));
    CHECK(r.df_between == 2);
    CHECK(r.df_within == 6);
    // For (2, 6) degrees of freedom the upper tail is (1 + F/3)^-3.
    CHECK_THAT(r.p, WithinAbs(std::pow(1.0 + 3.0 / 3.0, -3.0), 1e-10));
}

TEST_CASE("f tail closed forms")
{
    for (double f : {0.1, 0.7, 1.0, 2.5, 5.1433, 12.0, 80.0}) {
        CHECK_THAT(f_upper_tail(f, 2, 6), WithinAbs(std::pow(1.0 + f / 3.0, -3.0), 1e-10));
        // d1 = 2 gives (1 + 2F/d2)^(-d2/2) for any d2.
        CHECK_THAT(f_upper_tail(f, 2, 20), WithinAbs(std::pow(1.0 + f / 10.0, -10.0), 1e-10));
        // d1 = d2 = 1 is the Cauchy-type tail 1 - (2/pi) atan(sqrt F).
        CHECK_THAT(f_upper_tail(f, 1, 1), WithinAbs(1.0 - 2.0 / M_PI * std::atan(std::sqrt(f)), 1e-10));
    }
    CHECK_THAT(f_upper_tail(5.1433, 2, 6), WithinAbs(0.05, 1e-4));
    CHECK(f_upper_tail(0.0, 3, 9) == 1.0);
}

TEST_CASE("incomplete beta symmetry")
{
    for (double x : {0.05, 0.3, 0.5, 0.77, 0.99})
        for (auto [a, b] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {2, 3}, {7.5, 1.5}, {30, 40}})
            CHECK_THAT(incomplete_beta(a, b, x) + incomplete_beta(b, a, 1.0 - x), WithinAbs(1.0, 1e-12));
    CHECK_THAT(incomplete_beta(1, 1, 0.3), WithinAbs(0.3, 1e-14));
    CHECK_THAT(incomplete_beta(2, 1, 0.3), WithinAbs(0.09, 1e-14));
}

TEST_CASE("degenerate anova")
{
    AnovaResult same = one_way_anova({{1, 2, 3}, {1, 2, 3}});
    CHECK(same.f == 0.0);
    CHECK(same.p == 1.0);
    AnovaResult tight = one_way_anova({{1, 1}, {2, 2}});
    CHECK(std::isinf(tight.f));
    CHECK(tight.p == 0.0);
    CHECK_THROWS(one_way_anova({{1, 2, 3}}));
}

TEST_CASE("anova invariance")
{
    Rng rng(3);
    std::vector<std::vector<double>> g(4);
    for (auto& v : g)
        for (int k = 0; k < 6; ++k) v.push_back(rng.normal());
    AnovaResult base = one_way_anova(g);
    auto shifted = g;
    for (auto& v : shifted)
        for (double& x : v) x = 3.0 * x - 11.0;
    AnovaResult s = one_way_anova(shifted);
    CHECK_THAT(s.f, WithinRel(base.f, 1e-12));
    CHECK_THAT(s.p, WithinRel(base.p, 1e-10));
}

TEST_CASE("coefficient of determination")
{
    CHECK_THAT(r_squared({1, 2, 3}, {1, 2, 3}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(r_squared({1, 2, 3}, {1, 3, 2}), WithinAbs(0.25, 1e-15));
    CHECK_THAT(r_squared({1, 2, 3}, {-2, -4, -6}), WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(r_squared({1, 2, 3}, {2, 2, 2}), Error);
}
