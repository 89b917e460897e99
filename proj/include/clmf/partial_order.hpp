#ifndef CLMF_PARTIAL_ORDER_HPP
#define CLMF_PARTIAL_ORDER_HPP

#include "clmf/multi_index.hpp"
#include "clmf/spectral.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace clmf {

// Per order k: eta_k (one-dimensional) and nu_{k-1} (dimension k-1).
// Components are coefficient functionals so that delta-type laws stay exact.
struct PartialOrderProfile {
    std::string label;
    std::function<cplx(long)> eta;                    // eta_k, taken independent of k unless eta_by_order is set
    std::map<int, std::function<cplx(long)>> eta_by_order;
    std::function<cplx(const MultiIndex&)> nu;        // nu_{k-1}, dimension given by the index length

    cplx eta_at(int k, long n) const;

    // eta = nu = uniform
    static PartialOrderProfile uniform();
    // eta = mu_0, nu = point mass at the origin
    static PartialOrderProfile ordered(std::function<cplx(long)> mu0);
    static PartialOrderProfile from_nu(std::function<cplx(long)> eta, std::function<cplx(const MultiIndex&)> nu,
                                       std::string label);
};

// (eta_k(S) / k) sum_l nu_{k-1}(n without l); order 1 returns eta_1.
cplx partial_order_coefficient(const PartialOrderProfile& profile, const MultiIndex& n);
SpectralCoefficients build_partial_order_marginal(const PartialOrderProfile& profile, int k, int radius);

struct FactorizationVerdict {
    bool pass = true;
    std::vector<double> residual;  // per order, index 0 is order 1
    std::vector<std::string> failures;
};

// family[r-1] is the order-r marginal.  Checks the residual against the profile
// and the predicates of the profile's components on the same truncation.
FactorizationVerdict check_partial_order_factorization(const std::vector<SpectralCoefficients>& family,
                                                       const PartialOrderProfile& profile, double tol = 1e-8);

// (eta_inf * zeta_k, rho_{k-1}): the eta component multiplies coefficientwise.
PartialOrderProfile compose_partially_ordered(std::function<cplx(long)> eta_inf, const PartialOrderProfile& inner);

struct ObstructionVerdict {
    bool pass = true;
    double worst_j2 = 0.0;
    double worst_j3 = 0.0;
    bool common_law = false;
    double worst_binary = 0.0;  // distance of nu(n) from {0, 1} when all orders agree
    std::vector<std::string> failures;
};

// nu_by_order(k, n): one-dimensional coefficients of nu_k for k >= 2.
// Verifies k nu_2(n) = 2 nu_k(n) + (k-2) nu_k(n)^2 and the three-point identity
// on the sampled frequencies; when all orders coincide also checks nu(n) in {0, 1}.
ObstructionVerdict decoupled_obstruction_check(const std::function<double(int, long)>& nu_by_order, int K,
                                               int radius, double tol = 1e-10);

struct PropagationWitness {
    std::vector<long> witnesses;        // |n| > sqrt(2/m_2) with nonzero obstruction
    std::vector<std::pair<long, double>> growth;  // (n, n^2 |q(n)|)
};

// q(n) = f_{2,0}(n, n) + 2 f_{1,0}(2n) / (m_2 n^2 - 2)
double propagation_quantity(const std::function<cplx(long)>& f10, const std::function<cplx(long, long)>& f20,
                            double m2, long n);
PropagationWitness propagation_failure_witness(const std::function<cplx(long)>& f10,
                                               const std::function<cplx(long, long)>& f20, double m2, long n_lo,
                                               long n_hi, double tol = 1e-12);

}  // namespace clmf

#endif
