#include "clmf/partial_order.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clmf {

cplx PartialOrderProfile::eta_at(int k, long n) const
{
    if (auto it = eta_by_order.find(k); it != eta_by_order.end()) return it->second(n);
    if (!eta) throw std::invalid_argument("profile '" + label + "' has no eta component for order " + std::to_string(k));
    return eta(n);
}

PartialOrderProfile PartialOrderProfile::uniform()
{
    PartialOrderProfile p;
    p.label = "uniform";
    p.eta = [](long n) { return cplx(delta0(n), 0.0); };
    p.nu = [](const MultiIndex& n) { return cplx(is_zero(n) ? 1.0 : 0.0, 0.0); };
    return p;
}

PartialOrderProfile PartialOrderProfile::ordered(std::function<cplx(long)> mu0)
{
    PartialOrderProfile p;
    p.label = "ordered";
    p.eta = std::move(mu0);
    p.nu = [](const MultiIndex&) { return cplx(1.0, 0.0); };
    return p;
}

PartialOrderProfile PartialOrderProfile::from_nu(std::function<cplx(long)> eta,
                                                 std::function<cplx(const MultiIndex&)> nu, std::string label)
{
    PartialOrderProfile p;
    p.label = std::move(label);
    p.eta = std::move(eta);
    p.nu = std::move(nu);
    return p;
}

cplx partial_order_coefficient(const PartialOrderProfile& profile, const MultiIndex& n)
{
    const int k = int(n.size());
    if (k < 1) throw std::invalid_argument("partial order: empty index");
    const cplx eta = profile.eta_at(k, index_sum(n));
    if (k == 1) return eta;
    if (!profile.nu) throw std::invalid_argument("profile '" + profile.label + "' has no nu component");
    if (eta == cplx(0.0, 0.0)) return 0.0;
    cplx sum = 0.0;
    for (int l = 0; l < k; ++l) sum += profile.nu(drop(n, l));
    return eta * sum / double(k);
}

SpectralCoefficients build_partial_order_marginal(const PartialOrderProfile& profile, int k, int radius)
{
    return SpectralCoefficients::from_function(
        k, radius, [&profile](const MultiIndex& n) { return partial_order_coefficient(profile, n); },
        profile.label + "_po_" + std::to_string(k));
}

FactorizationVerdict check_partial_order_factorization(const std::vector<SpectralCoefficients>& family,
                                                       const PartialOrderProfile& profile, double tol)
{
    FactorizationVerdict v;
    for (std::size_t r = 0; r < family.size(); ++r) {
        const auto& c = family[r];
        const int k = int(r) + 1;
        if (c.dimension() != k) throw std::invalid_argument("factorization: family order mismatch");
        double worst = 0.0;
        for (std::size_t f = 0; f < c.size(); ++f) {
            const MultiIndex n = c.index_at(f);
            worst = std::max(worst, std::abs(c.values()[f] - partial_order_coefficient(profile, n)));
        }
        v.residual.push_back(worst);
        if (!(worst <= tol)) {
            v.pass = false;
            v.failures.push_back("order " + std::to_string(k) + ": residual " + std::to_string(worst));
        }

        const auto eta = SpectralCoefficients::from_function(
            1, c.n_max(), [&](const MultiIndex& n) { return profile.eta_at(k, n[0]); });
        if (!check_probability(eta, tol).pass) {
            v.pass = false;
            v.failures.push_back("order " + std::to_string(k) + ": eta is not a probability law");
        }
        if (k >= 2) {
            const auto nu = SpectralCoefficients::from_function(k - 1, c.n_max(), profile.nu);
            const bool ok = check_probability(nu, tol).pass && check_even(nu, tol).pass &&
                            check_symmetric(nu, tol).pass;
            if (!ok) {
                v.pass = false;
                v.failures.push_back("order " + std::to_string(k) + ": nu is not an even symmetric probability law");
            }
        }
    }
    return v;
}

PartialOrderProfile compose_partially_ordered(std::function<cplx(long)> eta_inf, const PartialOrderProfile& inner)
{
    PartialOrderProfile p;
    p.label = "composed(" + inner.label + ")";
    if (inner.eta) {
        auto zeta = inner.eta;
        p.eta = [eta_inf, zeta](long n) { return eta_inf(n) * zeta(n); };
    }
    for (const auto& [k, zeta] : inner.eta_by_order)
        p.eta_by_order[k] = [eta_inf, zeta](long n) { return eta_inf(n) * zeta(n); };
    p.nu = inner.nu;
    return p;
}

ObstructionVerdict decoupled_obstruction_check(const std::function<double(int, long)>& nu_by_order, int K,
                                               int radius, double tol)
{
    ObstructionVerdict v;
    for (int k = 2; k <= K; ++k)
        for (long n = -radius; n <= radius; ++n) {
            const double nk = nu_by_order(k, n);
            const double d = std::abs(k * nu_by_order(2, n) - (2.0 * nk + (k - 2) * nk * nk));
            v.worst_j2 = std::max(v.worst_j2, d);
        }
    for (int k = 3; k <= K; ++k)
        for (long a = -radius; a <= radius; ++a)
            for (long b = -radius; b <= radius; ++b) {
                auto n3 = [&](long x) { return nu_by_order(3, x); };
                auto nk = [&](long x) { return nu_by_order(k, x); };
                const double lhs = k * (n3(a) * n3(b) + n3(a + b) * (n3(a) + n3(b)));
                const double rhs = 3.0 * (nk(a) * nk(b) + nk(a + b) * (nk(a) + nk(b)) +
                                          (k - 3) * nk(a + b) * nk(a) * nk(b));
                v.worst_j3 = std::max(v.worst_j3, std::abs(lhs - rhs));
            }
    if (v.worst_j2 > tol) {
        v.pass = false;
        v.failures.push_back("two-point identity violated by " + std::to_string(v.worst_j2));
    }
    if (v.worst_j3 > tol) {
        v.pass = false;
        v.failures.push_back("three-point identity violated by " + std::to_string(v.worst_j3));
    }

    v.common_law = true;
    for (int k = 3; k <= K && v.common_law; ++k)
        for (long n = -radius; n <= radius; ++n)
            if (std::abs(nu_by_order(k, n) - nu_by_order(2, n)) > tol) {
                v.common_law = false;
                break;
            }
    if (v.common_law) {
        for (long n = -radius; n <= radius; ++n) {
            const double x = nu_by_order(2, n);
            v.worst_binary = std::max(v.worst_binary, std::min(std::abs(x), std::abs(x - 1.0)));
        }
        if (v.worst_binary > tol) {
            v.pass = false;
            v.failures.push_back("common law takes values outside {0, 1}");
        }
    }
    return v;
}

double propagation_quantity(const std::function<cplx(long)>& f10, const std::function<cplx(long, long)>& f20,
                            double m2, long n)
{
    const double nn = double(n) * double(n);
    return std::abs(f20(n, n) + 2.0 * f10(2 * n) / (m2 * nn - 2.0));
}

PropagationWitness propagation_failure_witness(const std::function<cplx(long)>& f10,
                                               const std::function<cplx(long, long)>& f20, double m2, long n_lo,
                                               long n_hi, double tol)
{
    if (!(m2 > 0.0)) throw std::invalid_argument("propagation witness: m_2 must be positive");
    PropagationWitness w;
    const double threshold = std::sqrt(2.0 / m2);
    for (long n = n_lo; n <= n_hi; ++n) {
        if (!(std::abs(double(n)) > threshold)) continue;
        const double q = propagation_quantity(f10, f20, m2, n);
        if (q > tol) w.witnesses.push_back(n);
        w.growth.emplace_back(n, double(n) * double(n) * q);
    }
    return w;
}

}  // namespace clmf
