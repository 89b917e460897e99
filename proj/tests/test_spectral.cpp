#include "clmf/exp_polynomial.hpp"
#include "clmf/initial_data.hpp"
#include "clmf/multi_index.hpp"
#include "clmf/spectral.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace clmf;

TEST_CASE("multi-index helpers")
{
    CHECK(fold({1, 2, 3}, 0, 2) == MultiIndex{4, 2});
    CHECK(fold({1, 2, 3}, 1, 2) == MultiIndex{1, 5});
    CHECK(drop({1, 2, 3}, 1) == MultiIndex{1, 3});
    CHECK(cube(2, 1).size() == 9);
    CHECK(cube(3, 2).front() == MultiIndex{-2, -2, -2});
    CHECK(index_sum({3, -1, 4}) == 6);
    CHECK(index_sum_squares({3, -1, 4}) == 26);
    CHECK(is_zero({0, 0}));
    CHECK_FALSE(is_zero({0, 1}));
    CHECK(negate({1, -2}) == MultiIndex{-1, 2});
    CHECK(to_string({1, -2}) == "(1,-2)");
}

TEST_CASE("delta0")
{
    CHECK(delta0(0) == 1);
    CHECK(delta0(3) == 0);
    CHECK(delta0(-1) == 0);
}

TEST_CASE("exppoly_convolve closed forms")
{
    const double a = 1.3, b = 0.4;
    const auto q = ExpPolynomial::exponential(1.0, b);
    const auto c = exppoly_convolve(a, q);
    for (double t : {0.0, 0.3, 1.0, 4.0}) {
        const double expect = (std::exp(-b * t) - std::exp(-a * t)) / (a - b);
        CHECK(std::abs(c(t) - expect) < 1e-14);
    }

    const auto r = exppoly_convolve(a, ExpPolynomial::exponential(1.0, a));
    for (double t : {0.0, 0.3, 1.0, 4.0}) CHECK(std::abs(r(t) - t * std::exp(-a * t)) < 1e-14);

    const auto z = exppoly_convolve(0.0, ExpPolynomial::constant(1.0));
    for (double t : {0.0, 0.3, 1.0, 4.0}) CHECK(std::abs(z(t) - t) < 1e-14);
}

TEST_CASE("exppoly_convolve matches quadrature on random inputs")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rate(0.0, 3.0);
    std::uniform_int_distribution<int> power(0, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const double alpha = rate(rng);
        double beta = rate(rng);
        if (std::abs(alpha - beta) <= 1e-6) beta += 0.1;
        const int p = power(rng);
        const cplx coef(1.0, 0.5);
        const auto q = ExpPolynomial::exponential(coef, beta, p);
        const auto c = exppoly_convolve(alpha, q);
        for (double t : {0.5, 2.0, 5.0, 10.0}) {
            const cplx ref = oracle::gk(
                [&](double s) { return std::exp(-alpha * (t - s)) * coef * std::pow(s, p) * std::exp(-beta * s); }, 0.0,
                t);
            worst = std::max(worst, std::abs(c(t) - ref));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("exppoly tags survive convolution")
{
    auto q = ExpPolynomial::exponential(1.0, 2.0);
    const auto c = exppoly_convolve(2.0, q, kRateTolerance, 5);
    REQUIRE(c.size() == 1);
    CHECK(c.terms()[0].tag == 5);
    CHECK(c.terms()[0].power == 1);
    CHECK(std::abs(c.evaluate_tag(1.0, 5) - std::exp(-2.0)) < 1e-15);
}

namespace {

SpectralCoefficients uniform_product(int k, int R)
{
    return SpectralCoefficients::from_function(k, R, [](const MultiIndex& n) { return cplx(is_zero(n) ? 1.0 : 0.0); });
}

SpectralCoefficients nu1_family(double m2, int R)
{
    return SpectralCoefficients::from_function(1, R, [&](const MultiIndex& n) { return 2.0 / (m2 * n[0] * n[0] + 2.0); });
}

}  // namespace

TEST_CASE("marginal")
{
    const auto u = marginal(uniform_product(2, 3), 1);
    CHECK(u.dimension() == 1);
    for (int n = -3; n <= 3; ++n) CHECK(u({n}) == cplx(n == 0 ? 1.0 : 0.0));

    const auto mu0 = Profile1D::wrapped_cauchy(0.7, 0.3);
    const auto ordered = SpectralCoefficients::from_function(3, 2, [&](const MultiIndex& n) { return mu0.coef(index_sum(n)); });
    const auto m2 = marginal(ordered, 2);
    for (std::size_t f = 0; f < m2.size(); ++f) {
        const MultiIndex n = m2.index_at(f);
        CHECK(m2.values()[f] == mu0.coef(n[0] + n[1]));
    }
    CHECK(marginal(ordered, 3).values() == ordered.values());
    CHECK_THROWS_AS(marginal(ordered, 0), std::invalid_argument);
    CHECK_THROWS_AS(marginal(ordered, 4), std::invalid_argument);
}

TEST_CASE("probability predicates")
{
    CHECK(check_probability(uniform_product(2, 4)).pass);
    CHECK(check_probability(nu1_family(1.0, 64)).pass);

    auto bad = uniform_product(1, 3);
    bad.set({2}, 1.5);
    bad.set({-2}, 1.5);
    const auto v = check_probability(bad);
    CHECK_FALSE(v.pass);
    CHECK(v.worst == doctest::Approx(0.5));

    CHECK(check_even(nu1_family(1.0, 16)).pass);
    const auto shifted = SpectralCoefficients::from_function(1, 5, [](const MultiIndex& n) { return std::polar(1.0, -0.4 * n[0]); });
    CHECK(check_probability(shifted).pass);
    CHECK_FALSE(check_even(shifted).pass);

    CHECK(check_symmetric(shifted).pass);
    auto asym = uniform_product(2, 2);
    asym.set({1, 2}, 0.1);
    asym.set({-1, -2}, 0.1);
    CHECK_FALSE(check_symmetric(asym).pass);
}

TEST_CASE("density evaluation")
{
    std::vector<std::vector<double>> grid;
    for (int i = 0; i < 7; ++i) grid.push_back({-3.0 + i});
    const auto d = density_eval(uniform_product(1, 5), grid);
    for (double v : d.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    const auto h = density_eval(nu1_family(1.0, 4000), {{0.0}});
    CHECK(h.values[0] == doctest::Approx(oracle::h_at_zero_m2_one()).epsilon(1e-3));

    const auto wc = Profile1D::wrapped_cauchy(0.6, 0.8);
    const auto fam = SpectralCoefficients::from_function(1, 60, [&](const MultiIndex& n) { return wc.coef(n[0]); });
    const int M = 4096;
    std::vector<std::vector<double>> fine;
    for (int i = 0; i < M; ++i) fine.push_back({-std::numbers::pi + 2.0 * std::numbers::pi * i / M});
    const auto dv = density_eval(fam, fine);
    double mass = 0.0;
    for (double v : dv.values) mass += v / M;
    CHECK(std::abs(mass - 1.0) <= 1e-6);
    for (int i = 0; i < M; i += 97) {
        const double th = fine[i][0] - 0.8;
        const double exact = (1 - 0.36) / (1 - 1.2 * std::cos(th) + 0.36);
        CHECK(dv.values[i] == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("density of two-dimensional product integrates to one")
{
    const auto wc = Profile1D::wrapped_cauchy(0.5, 0.0);
    const auto fam = SpectralCoefficients::from_function(
        2, 24, [&](const MultiIndex& n) { return wc.coef(n[0]) * wc.coef(n[1]); });
    const int M = 64;
    std::vector<std::vector<double>> grid;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            grid.push_back({2 * std::numbers::pi * i / M, 2 * std::numbers::pi * j / M});
    const auto dv = density_eval(fam, grid);
    double mass = 0.0;
    for (double v : dv.values) mass += v / (M * M);
    CHECK(std::abs(mass - 1.0) <= 1e-6);
}

TEST_CASE("density rejects non-real input")
{
    auto c = uniform_product(1, 2);
    c.set({1}, cplx(0.0, 0.3));
    c.set({-1}, cplx(0.0, 0.3));
    CHECK_THROWS(density_eval(c, {{0.7}}));
}

TEST_CASE("Bochner Gram matrices")
{
    std::vector<MultiIndex> pts = {{0}, {1}, {3}, {-2}, {5}};
    const auto ones = SpectralCoefficients::from_function(1, 10, [](const MultiIndex&) { return cplx(1.0); });
    const auto v1 = bochner_psd_check(ones, pts);
    CHECK(v1.pass);
    CHECK(std::abs(v1.min_eigenvalue) < 1e-12);

    const auto v2 = bochner_psd_check(uniform_product(1, 10), pts);
    CHECK(v2.pass);
    CHECK(v2.min_eigenvalue == doctest::Approx(1.0));

    const auto bad = SpectralCoefficients::from_function(1, 10, [](const MultiIndex& n) { return cplx(n[0] == 0 ? 1.0 : -0.9); });
    CHECK_FALSE(bochner_psd_check(bad, pts).pass);

    CHECK_THROWS_AS(bochner_psd_check(ones, {{0}, {11}}), std::out_of_range);
}

TEST_CASE("spectral JSON round trip")
{
    const auto wc = Profile1D::wrapped_cauchy(0.4, 1.1);
    auto c = SpectralCoefficients::from_function(2, 3, [&](const MultiIndex& n) { return wc.coef(n[0]) * wc.coef(n[1]); }, "wc");
    c.time = 0.25;
    nlohmann::json j = c;
    const auto back = j.get<SpectralCoefficients>();
    CHECK(back.dimension() == 2);
    CHECK(back.n_max() == 3);
    CHECK(back.label == "wc");
    CHECK(back.time == 0.25);
    CHECK(back.values() == c.values());
    CHECK(nlohmann::json::parse(j.dump()).get<SpectralCoefficients>().values() == c.values());
}
