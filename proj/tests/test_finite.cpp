#include "clmf/finite_system.hpp"
#include "clmf/initial_data.hpp"
#include "clmf/limit_dynamics.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace clmf;

namespace {

oracle::Recursion finite_oracle(const InitialData& init, const ScalingSchedule& s, const InteractionGenerator& gen)
{
    const double c = s.lambda * s.N / (s.N - 1.0);
    auto gh = [gen, eps = s.epsilon](long n) { return g_hat(gen, eps, n); };
    oracle::Recursion r;
    r.rate = [=](const MultiIndex& n) {
        const int k = int(n.size());
        double loss = 0.0;
        for (int v : n) loss += 1.0 - gh(v);
        return c * ((s.N - k) * loss + k * (k - 1.0));
    };
    r.weight = [=](const MultiIndex& n, int i, int j) { return c * (gh(n[i]) + gh(n[j])); };
    r.initial = [init](const MultiIndex& n) { return init(n); };
    return r;
}

}  // namespace

TEST_CASE("finite k=1 closed form")
{
    const auto gen = InteractionGenerator::uniform();
    const auto s = ScalingSchedule::critical(64);
    const auto wc = Profile1D::wrapped_cauchy(0.8, 0.5);
    const auto sol = evolve_finite_marginal(InitialData::chaotic(wc), s, gen, 1);
    for (int n : {-3, 1, 2, 5})
        for (double t : {0.0, 0.5, 1.0, 3.0}) {
            const cplx expect = std::exp(-64.0 * (1.0 - g_hat(gen, s.epsilon, n)) * t) * wc.coef(n);
            CHECK(std::abs(sol({n}, t) - expect) <= 1e-14);
        }
}

TEST_CASE("finite zero index stays one")
{
    const auto sol = evolve_finite_marginal(InitialData::chaotic(Profile1D::rational(1.0)), ScalingSchedule::critical(16),
                                            InteractionGenerator::gaussian(), 3);
    for (double t : {0.0, 1.0, 10.0}) {
        CHECK(std::abs(sol({0, 0, 0}, t) - 1.0) <= 1e-13);
        CHECK(std::abs(sol({0, 0}, t) - 1.0) <= 1e-13);
    }
}

TEST_CASE("finite trajectory matches quadrature of the recursion")
{
    const auto gen = InteractionGenerator::uniform();
    const auto s = ScalingSchedule::critical(16);
    const auto init = InitialData::chaotic(Profile1D::wrapped_cauchy(0.6, 0.4));
    const auto sol = evolve_finite_marginal(init, s, gen, 3);
    const auto ref = finite_oracle(init, s, gen);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-3, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
        const int k = 2 + trial % 2;
        MultiIndex n(k);
        for (auto& v : n) v = d(rng);
        for (double t : {0.1, 1.0, 5.0}) worst = std::max(worst, std::abs(sol(n, t) - ref(n, t)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("finite evaluation is a symmetric probability family")
{
    const auto sol = evolve_finite_marginal(InitialData::chaotic(Profile1D::wrapped_cauchy(0.5, 1.0)),
                                            ScalingSchedule::critical(32), InteractionGenerator::gaussian(), 2);
    for (double t : {0.0, 0.3, 2.0}) {
        std::size_t missing = 0;
        const auto c = sol.evaluate(2, 4, t, &missing);
        CHECK(missing == 0);
        CHECK(check_probability(c).pass);
        CHECK(check_symmetric(c).pass);
    }
}

TEST_CASE("finite evolution is permutation equivariant")
{
    const auto p = Profile1D::wrapped_cauchy(0.7, 0.2);
    const auto q = Profile1D::wrapped_cauchy(0.4, -0.9);
    const int R = 3;
    const auto f1 = SpectralCoefficients::from_function(1, 2 * R, [&](const MultiIndex& n) { return p.coef(n[0]); });
    const auto f2 = SpectralCoefficients::from_function(2, R, [&](const MultiIndex& n) { return p.coef(n[0]) * q.coef(n[1]); });
    const auto f2s = SpectralCoefficients::from_function(2, R, [&](const MultiIndex& n) { return p.coef(n[1]) * q.coef(n[0]); });
    const auto s = ScalingSchedule::critical(16);
    const auto gen = InteractionGenerator::uniform();
    const auto a = evolve_finite_marginal(InitialData::from_tensors({f1, f2}), s, gen, 2);
    const auto b = evolve_finite_marginal(InitialData::from_tensors({f1, f2s}), s, gen, 2);
    for (const auto& n : cube(2, R))
        for (double t : {0.2, 1.5}) CHECK(a(n, t) == b({n[1], n[0]}, t));
}

TEST_CASE("missing tensor data is reported")
{
    const auto f1 = SpectralCoefficients::from_function(1, 2, [](const MultiIndex& n) { return cplx(n[0] == 0); });
    const auto f2 = SpectralCoefficients::from_function(2, 2, [](const MultiIndex& n) { return cplx(is_zero(n)); });
    const auto sol = evolve_finite_marginal(InitialData::from_tensors({f1, f2}), ScalingSchedule::critical(8),
                                            InteractionGenerator::uniform(), 2);
    CHECK_THROWS_AS(sol.trajectory({2, 2}), MissingIndex);
    std::size_t missing = 0;
    const auto c = sol.evaluate(2, 2, 0.5, &missing);
    CHECK(missing > 0);
    CHECK(std::isnan(c({2, 2}).real()));
}

TEST_CASE("finite marginals approach the limit as N grows")
{
    const auto gen = InteractionGenerator::uniform();
    const auto init = InitialData::chaotic(Profile1D::wrapped_cauchy(0.8, 0.0));
    const auto lim = evolve_limit_marginal(init, SecondMoment(gen.m2()), 1.0, 1);
    double prev = 1e300;
    for (int N : {16, 64, 256, 1024}) {
        const auto fin = evolve_finite_marginal(init, ScalingSchedule::critical(N), gen, 1);
        const auto gaps = finite_vs_limit_gap(fin, lim, {{1}, {2}, {3}}, {0.5, 1.0});
        double g = 0.0;
        for (const auto& e : gaps) g = std::max(g, e.gap);
        CHECK(g < prev);
        prev = g;
    }
    const auto fin = evolve_finite_marginal(init, ScalingSchedule::critical(64), gen, 2);
    const auto lim2 = evolve_limit_marginal(init, SecondMoment(gen.m2()), 1.0, 2);
    for (const auto& e : finite_vs_limit_gap(fin, lim2, {{1, -1}, {2, 1}}, {0.0})) CHECK(e.gap == 0.0);
}

TEST_CASE("finite recursion rejects N <= k")
{
    CHECK_THROWS(FiniteMarginalSolution(InitialData::chaotic(Profile1D::uniform()), ScalingSchedule::critical(3),
                                        InteractionGenerator::uniform(), 3));
}

TEST_CASE("trajectory JSON export")
{
    const auto sol = evolve_finite_marginal(InitialData::chaotic(Profile1D::wrapped_cauchy(0.5, 0.0)),
                                            ScalingSchedule::critical(16), InteractionGenerator::uniform(), 2);
    const auto j = sol.terms_json({1, -1});
    REQUIRE(j.is_array());
    CHECK(!j.empty());
    CHECK(j[0].contains("rate"));
}
