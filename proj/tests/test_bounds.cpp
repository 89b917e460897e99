#include "clmf/bounds.hpp"
#include "clmf/finite_system.hpp"
#include "clmf/initial_data.hpp"
#include "clmf/limit_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace clmf;

namespace {

// zeta(3/2) by direct summation with an Euler-Maclaurin tail
double zeta_three_halves_oracle()
{
    const long M = 100000;
    double s = 0.0;
    for (long n = M - 1; n >= 1; --n) s += std::pow(double(n), -1.5);
    const double m = double(M);
    return s + 2.0 / std::sqrt(m) + 0.5 * std::pow(m, -1.5) + 1.5 / 12.0 * std::pow(m, -2.5);
}

}  // namespace

TEST_CASE("level sets")
{
    CHECK(level_sets(3, 3) == std::vector<std::vector<int>>{{1, 1, 1}});
    CHECK(level_sets(3, 2) == std::vector<std::vector<int>>{{1, 2}, {2, 1}});
    CHECK(level_sets(4, 2).size() == 3);
    CHECK(level_sets(5, 1) == std::vector<std::vector<int>>{{5}});
    for (const auto& p : level_sets(6, 3)) CHECK(p[0] + p[1] + p[2] == 6);
    CHECK(level_sets(6, 3).size() == 10);
    CHECK_THROWS(level_sets(3, 4));
}

TEST_CASE("s_map")
{
    CHECK(s_map({2, 1}, {0, 1, 2}, {1, 2, 3}) == MultiIndex{3, 3});
    CHECK(s_map({1, 1, 1}, {2, 0, 1}, {1, 2, 3}) == MultiIndex{3, 1, 2});
    CHECK(s_map({3}, {1, 2, 0}, {1, 2, 3}) == MultiIndex{6});
    CHECK_THROWS(s_map({2, 2}, {0, 1, 2}, {1, 2, 3}));
    CHECK_THROWS(s_map({2, 1}, {0, 0, 2}, {1, 2, 3}));
}

TEST_CASE("quadratic sum examples")
{
    const double z = zeta_three_halves_oracle();
    const auto r = quadratic_sum_bound(1.0, 0, 0, 0);
    CHECK(r.brute == doctest::Approx(std::numbers::pi * std::numbers::pi / 3).epsilon(1e-5));
    CHECK(r.bound == doctest::Approx(6.0 + 16.0 * z).epsilon(1e-10));
    CHECK(r.pass);
    CHECK(quadratic_sum_rhs(2.0, 1) == doctest::Approx(6.0 + 8.0 * z).epsilon(1e-10));
    CHECK(quadratic_sum_rhs(2.0, 1) == doctest::Approx(26.90).epsilon(1e-3));
    CHECK(quadratic_sum_rhs(0.5, 3) == doctest::Approx(12.0 + 32.0 * z).epsilon(1e-10));
}

TEST_CASE("quadratic sum bound over random configurations")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> ab(-50, 50), kk(-30, 30);
    const double ms[] = {0.5, 1.0, 2.0, 1.0 / 12, 3.0};
    for (int trial = 0; trial < 10; ++trial) {
        const double m = ms[trial % 5];
        const auto r = quadratic_sum_bound(m, kk(rng), ab(rng), ab(rng), 100000);
        CHECK(r.pass);
    }
}

TEST_CASE("quadratic sum tail guard")
{
    CHECK_THROWS(quadratic_sum_brute(1.0, 50, 0, 0, 100));
}

TEST_CASE("constants ledger")
{
    const auto u = InteractionGenerator::uniform();
    const auto L3 = constants_ledger(u, 1024, 2, 3);
    const auto L4 = constants_ledger(u, 1024, 2, 4);
    CHECK(L3.kappa == 3);
    CHECK(L4.kappa == 2);
    CHECK(L4.alpha == doctest::Approx(std::pow(1024.0, -0.25)));
    CHECK(L3.alpha == doctest::Approx(std::pow(1024.0, -1.0 / 3)));
    CHECK(L4.epsilon == doctest::Approx(1.0 / 32));
    CHECK(L4.frak_c[1] == L4.c1);
    const auto L = constants_ledger(u, 4096, 4, 4);
    for (int j = 1; j < 4; ++j) CHECK(L.frak_c[j + 1] > L.frak_c[j]);
    CHECK(L.cal_C == doctest::Approx(23.0 * L.frak_c[4]));
    const auto j = L.to_json();
    CHECK(j.contains("frak_c"));
    CHECK(j.contains("kappa"));
    CHECK(constants_ledger(u, 256, 1, 4).tau > constants_ledger(u, 1024, 1, 4).tau);
    CHECK(constants_ledger(u, 1024, 1, 4).tau > constants_ledger(u, 4096, 1, 4).tau);
    CHECK_THROWS(constants_ledger(u, 1024, 1, 2));
}

TEST_CASE("D constants")
{
    const auto D1 = limit_distance_constants(4, SecondMoment(1.0));
    CHECK(D1[1] == 1.0);
    for (double m2 : {0.5, 1.0, 2.0, 4.0}) {
        const auto D = limit_distance_constants(4, SecondMoment(m2));
        for (int k = 2; k <= 4; ++k) CHECK(D[k] >= D[k - 1]);
    }
}

TEST_CASE("limit distance bound")
{
    const SecondMoment m(1.0);
    const auto sol = evolve_limit_marginal(InitialData::chaotic(Profile1D::uniform()), m, 1.0, 2);
    const StationaryHierarchy h(2, m);
    const auto rep = limit_distance_check(sol, h, cube(2, 4), {0.5, 1.0, 2.0, 5.0});
    CHECK(rep.pass());
    CHECK(rep.checks.size() == 81u * 4u);
    CHECK_THROWS(limit_distance_rhs(1.0, 1.0, 1.0, 0.0));
    CHECK(limit_distance_rhs(1.0, 1.0, 1.0, 60.0) < 1e-12);

    // log-slope at a zero-sum index
    const double l1 = std::abs(sol({1, -1}, 4.0) - h.f_infty({1, -1}));
    const double l2 = std::abs(sol({1, -1}, 6.0) - h.f_infty({1, -1}));
    CHECK(-std::log(l2 / l1) / 2.0 >= 2.0 - 1e-6);
}

TEST_CASE("finite distance bounds")
{
    const auto u = InteractionGenerator::uniform();
    const auto init = InitialData::chaotic(Profile1D::wrapped_cauchy(0.8, 0.3));
    const SecondMoment m(u.m2());
    const StationaryHierarchy h(2, m);
    const auto lim = evolve_limit_marginal(init, m, 1.0, 2);
    std::vector<double> rhs_fl, rhs_q;
    for (int N : {256, 1024, 4096}) {
        const auto fin = evolve_finite_marginal(init, ScalingSchedule::critical(N), u, 2);
        const auto L = constants_ledger(u, N, 2, 4);
        const auto rep = finite_distance_check(fin, lim, h, L, {{1}, {1, -1}}, {1.0});
        CHECK(rep.pass());
        for (const auto& c : rep.checks) {
            CHECK(c.slack() > 0.0);
            if (c.index == MultiIndex{1}) (c.kind == "finite-limit" ? rhs_fl : rhs_q).push_back(c.rhs);
        }
        CHECK(level_set_initial_gap(init, init, {1, 2, 3}) == 0.0);
        CHECK(!rep.to_csv().empty());
        CHECK(rep.to_json().at("checks").size() == rep.checks.size());
    }
    REQUIRE(rhs_fl.size() == 3);
    REQUIRE(rhs_q.size() == 3);
    for (int i = 0; i < 2; ++i) {
        CHECK(rhs_fl[i + 1] < rhs_fl[i]);
        CHECK(rhs_q[i + 1] < rhs_q[i]);
    }
}

TEST_CASE("level-set initial gap detects mismatched data")
{
    const auto a = InitialData::chaotic(Profile1D::wrapped_cauchy(0.8, 0.0));
    const auto b = InitialData::ordered(Profile1D::wrapped_cauchy(0.8, 0.0));
    CHECK(level_set_initial_gap(a, b, {1, 1}) == 0.0);
    CHECK(level_set_initial_gap(a, b, {1, -1, 1}) == doctest::Approx(0.8 - 0.512));
}
