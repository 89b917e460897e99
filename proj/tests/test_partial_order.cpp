#include "clmf/initial_data.hpp"
#include "clmf/limit_dynamics.hpp"
#include "clmf/partial_order.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"

using namespace clmf;

namespace {

std::vector<SpectralCoefficients> family_of(const PartialOrderProfile& p, int K, int radius)
{
    std::vector<SpectralCoefficients> fam;
    for (int k = 1; k <= K; ++k) fam.push_back(build_partial_order_marginal(p, k, radius));
    return fam;
}

PartialOrderProfile stationary_profile(const StationaryHierarchy& h)
{
    return PartialOrderProfile::from_nu([](long n) { return cplx(delta0(n)); },
                                        [&h](const MultiIndex& n) { return cplx(h.nu(n)); }, "stationary");
}

}  // namespace

TEST_CASE("uniform profile gives the uniform product")
{
    const auto p = PartialOrderProfile::uniform();
    for (int k = 1; k <= 3; ++k) {
        const auto c = build_partial_order_marginal(p, k, 3);
        for (std::size_t f = 0; f < c.size(); ++f) CHECK(c.values()[f] == cplx(is_zero(c.index_at(f)) ? 1.0 : 0.0));
    }
}

TEST_CASE("ordered profile gives the ordered pattern")
{
    const auto mu0 = Profile1D::wrapped_cauchy(0.6, 0.5);
    const auto p = PartialOrderProfile::ordered(mu0.coef);
    for (int k = 1; k <= 3; ++k) {
        const auto c = build_partial_order_marginal(p, k, 3);
        for (std::size_t f = 0; f < c.size(); ++f) CHECK(std::abs(c.values()[f] - mu0.coef(index_sum(c.index_at(f)))) <= 1e-15);
    }
}

TEST_CASE("stationary profile reproduces f_infinity")
{
    const StationaryHierarchy h(3, SecondMoment(1.0));
    const auto p = stationary_profile(h);
    for (int k = 1; k <= 3; ++k) {
        const auto c = build_partial_order_marginal(p, k, 4);
        const auto f = h.f_infty_tensor(k, 4);
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c.values()[i] - f.values()[i]) <= 1e-10);
    }
    const auto fam = std::vector<SpectralCoefficients>{h.f_infty_tensor(1, 4), h.f_infty_tensor(2, 4), h.f_infty_tensor(3, 4)};
    const auto v = check_partial_order_factorization(fam, p, 1e-10);
    CHECK(v.pass);
}

TEST_CASE("build then check round trips exactly")
{
    const StationaryHierarchy h(3, SecondMoment(1.0));
    const auto mu0 = Profile1D::wrapped_cauchy(0.6, 0.5);
    for (const auto& p : {PartialOrderProfile::uniform(), PartialOrderProfile::ordered(mu0.coef), stationary_profile(h)}) {
        const auto v = check_partial_order_factorization(family_of(p, 3, 3), p, 0.0);
        CHECK(v.pass);
        for (double r : v.residual) CHECK(r == 0.0);
    }
}

TEST_CASE("chaotic product is not partially ordered with a mismatched profile")
{
    const auto wc = Profile1D::wrapped_cauchy(0.5, 0.0);
    std::vector<SpectralCoefficients> fam;
    for (int k = 1; k <= 2; ++k)
        fam.push_back(SpectralCoefficients::from_function(k, 3, [&](const MultiIndex& n) {
            cplx v = 1.0;
            for (int x : n) v *= wc.coef(x);
            return v;
        }));
    const auto v = check_partial_order_factorization(fam, PartialOrderProfile::ordered(wc.coef));
    CHECK_FALSE(v.pass);
    CHECK(v.residual[0] == 0.0);
    CHECK(v.residual[1] > 1e-3);
}

TEST_CASE("profile predicates are enforced")
{
    auto bad = PartialOrderProfile::uniform();
    bad.nu = [](const MultiIndex& n) { return cplx(n[0] == 1 ? 0.5 : (is_zero(n) ? 1.0 : 0.0)); };
    const auto v = check_partial_order_factorization(family_of(bad, 2, 3), bad);
    CHECK_FALSE(v.pass);
}

TEST_CASE("composition")
{
    const auto inner = PartialOrderProfile::ordered(Profile1D::wrapped_cauchy(0.6, 0.3).coef);
    const auto u = compose_partially_ordered([](long n) { return cplx(delta0(n)); }, inner);
    for (long n = -4; n <= 4; ++n) CHECK(u.eta(n) == cplx(delta0(n)));
    const auto same = compose_partially_ordered([](long) { return cplx(1.0); }, inner);
    for (long n = -4; n <= 4; ++n) CHECK(same.eta(n) == inner.eta(n));
    CHECK(same.nu({1, 2}) == inner.nu({1, 2}));
    const auto a = Profile1D::wrapped_cauchy(0.5, 0.0), b = Profile1D::wrapped_cauchy(0.7, 0.0);
    const auto prod = compose_partially_ordered(a.coef, PartialOrderProfile::ordered(b.coef));
    for (long n = -4; n <= 4; ++n) CHECK(std::abs(prod.eta(n) - a.coef(n) * b.coef(n)) <= 1e-15);
}

TEST_CASE("decoupled obstruction")
{
    const auto delta = decoupled_obstruction_check([](int, long n) { return double(delta0(n)); }, 5, 6);
    CHECK(delta.pass);
    CHECK(delta.common_law);

    const auto half = decoupled_obstruction_check([](int, long n) { return n == 0 ? 1.0 : (std::abs(n) == 1 ? 0.5 : 0.0); }, 3, 3);
    CHECK_FALSE(half.pass);
    CHECK(half.worst_j2 == doctest::Approx(0.25));

    // nu(n) = 1 on multiples of 3: a subgroup, so closed under addition
    const auto sub = decoupled_obstruction_check([](int, long n) { return n % 3 == 0 ? 1.0 : 0.0; }, 4, 6);
    CHECK(sub.pass);
    CHECK(sub.worst_binary == 0.0);
}

TEST_CASE("lack of propagation witness")
{
    auto mu0 = [](long n) { return cplx(2.0 / (2.0 + double(n) * double(n))); };
    auto f20 = [&](long a, long b) { return mu0(a + b); };
    const auto w = propagation_failure_witness(mu0, f20, 1.0, -3, 1000);
    CHECK(std::find(w.witnesses.begin(), w.witnesses.end(), 2L) != w.witnesses.end());
    CHECK(std::find(w.witnesses.begin(), w.witnesses.end(), 1L) == w.witnesses.end());
    CHECK(w.growth.back().first == 1000);
    CHECK(w.growth.back().second == doctest::Approx(0.5).epsilon(0.01));
    CHECK(propagation_quantity(mu0, f20, 1.0, 2) == doctest::Approx(2.0 / 18 * 2.0));

    auto cancel = [&](long a, long b) { return -2.0 * mu0(a + b) / (double(a) * double(a) - 2.0); };
    CHECK(propagation_failure_witness(mu0, cancel, 1.0, 2, 200).witnesses.empty());
}
