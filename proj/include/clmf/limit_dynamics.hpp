#ifndef CLMF_LIMIT_DYNAMICS_HPP
#define CLMF_LIMIT_DYNAMICS_HPP

#include "clmf/exp_polynomial.hpp"
#include "clmf/initial_data.hpp"
#include "clmf/multi_index.hpp"
#include "clmf/second_moment.hpp"
#include "clmf/spectral.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace clmf {

enum class LimitRegime { Critical, Order };

// Exact trajectories t -> f_k(n, t) of the mean-field limit.
//
// Critical regime: homogeneous rate lambda (2k(k-1) + m_2 |n|^2) / 2 and gain
// 2 lambda sum_{i<j} f_{k-1}(fold).  Order regime: rate lambda k(k-1), same gain.
//
// In the critical regime every term carries a family tag: tag 0 collects the
// stationary family a_k f_{1,0}(S) e^{-lambda m_2 S^2 t / 2} and tag h >= 2 the
// family decaying like e^{-lambda h(h-1) t}.
class LimitMarginalSolution {
public:
    LimitMarginalSolution(InitialData init, SecondMoment m2, double lambda, int k_max,
                          LimitRegime regime = LimitRegime::Critical);

    int k_max() const { return k_max_; }
    const SecondMoment& m2() const { return m2_; }
    double lambda() const { return lambda_; }
    LimitRegime regime() const { return regime_; }
    const InitialData& initial() const { return init_; }

    const ExpPolynomial& trajectory(const MultiIndex& n) const;
    cplx operator()(const MultiIndex& n, double t) const { return trajectory(n)(t); }

    double rate(const MultiIndex& n) const;
    // Rate of the stationary family at n: lambda m_2 S^2 / 2.
    double stationary_rate(const MultiIndex& n) const;
    // Tolerance used for rate comparisons (0 when m_2 is rational).
    double rate_tolerance() const { return tol_; }

    SpectralCoefficients evaluate(int k, int radius, double t, std::size_t* missing = nullptr) const;

private:
    InitialData init_;
    SecondMoment m2_;
    double lambda_;
    int k_max_;
    LimitRegime regime_;
    double tol_;
    mutable std::vector<std::unordered_map<MultiIndex, ExpPolynomial, MultiIndexHash>> memo_;
};

LimitMarginalSolution evolve_limit_marginal(const InitialData& init, const SecondMoment& m2, double lambda, int k);
LimitMarginalSolution evolve_order_regime(const InitialData& init, double lambda, int k);

// Resonance: 2k(k-1) + m_2 sum n_r^2 == m_2 (sum n_r)^2, decided exactly for rational m_2.
bool is_resonant(const MultiIndex& n, const SecondMoment& m2);

// Stationary coefficients a_k(n), memoized per order.
class ACoefficients {
public:
    explicit ACoefficients(SecondMoment m2) : m2_(m2) {}
    double operator()(const MultiIndex& n) const;
    const SecondMoment& m2() const { return m2_; }

private:
    SecondMoment m2_;
    mutable std::vector<std::unordered_map<MultiIndex, double, MultiIndexHash>> memo_;
};

// ell[k] for k = 0..K, with ell[0] = 1 as the empty-product placeholder.
std::vector<double> ell_bounds(int K, const SecondMoment& m2);
// prod_{j <= k} ell_j for k = 0..K.
std::vector<double> ell_products(int K, const SecondMoment& m2);
// C[k] for k = 0..K; entries below 2 are zero.
std::vector<double> b_bound_constants(int K, const SecondMoment& m2);
// D[k] = max(C_k [k >= 2], prod_{j <= k} ell_j) for k = 0..K.
std::vector<double> limit_distance_constants(int K, const SecondMoment& m2);

struct AbEntry {
    MultiIndex index;
    std::optional<double> a;     // extracted stationary coefficient (absent when f_{1,0}(S) = 0)
    double a_expected = 0.0;     // from ACoefficients
    double max_b = 0.0;          // max over h and the t-grid of |b_{h,k}(t)|
    double decomposition_residual = 0.0;
};

struct AbReport {
    std::vector<AbEntry> entries;
    double worst_a_mismatch = 0.0;
    double worst_b_ratio = 0.0;  // max |b| / C_k
    double worst_residual = 0.0;
    bool pass = true;
};

// Splits each trajectory into sum_h e^{-lambda h(h-1)t} b_{h,k}(t) + a_k f_{1,0}(S) e^{-lambda m_2 S^2 t/2},
// compares a_k with ACoefficients and checks |b_{h,k}| <= C_k on the grid.
AbReport decompose_ab(const LimitMarginalSolution& sol, const std::vector<MultiIndex>& indices,
                      const std::vector<double>& times, double tol = 1e-10);

// a, xi, nu and f_infinity up to order K.
class StationaryHierarchy {
public:
    StationaryHierarchy(int K, SecondMoment m2);

    int K() const { return K_; }
    const SecondMoment& m2() const { return m2_; }

    double a(const MultiIndex& n) const { return a_(n); }
    double xi(const MultiIndex& n) const;
    double nu(const MultiIndex& n) const;
    double f_infty(const MultiIndex& n) const;
    // (delta_0(S)/k) sum_l nu_{k-1}(n without l), for k >= 2
    double f_infty_from_nu(const MultiIndex& n) const;

    SpectralCoefficients nu_tensor(int k, int radius) const;
    SpectralCoefficients f_infty_tensor(int k, int radius) const;

    // Largest |a-route - nu-route| over [-radius, radius]^k for k = 2..K.
    double cross_validate(int radius) const;

private:
    int K_;
    SecondMoment m2_;
    ACoefficients a_;
    mutable std::vector<std::unordered_map<MultiIndex, double, MultiIndexHash>> xi_memo_, nu_memo_;
};

// Canonical representative of n under permutations and global negation.
MultiIndex canonical_even_symmetric(const MultiIndex& n);

// H(theta) = 1 + 4 sum_{n >= 1} cos(n theta) / (m_2 n^2 + 2).
std::vector<double> h_density(double m2, const std::vector<double>& grid, double tol = 1e-12);

struct NuDensity {
    std::vector<double> values;
    double min_value = 0.0;
    double origin_value = 0.0;
    bool max_at_origin = true;
};

// Fejer-weighted partial sum of nu_k over [-radius, radius]^k at the grid points.
NuDensity nu_density(const StationaryHierarchy& hier, int k, int radius,
                     const std::vector<std::vector<double>>& grid);

}  // namespace clmf

#endif
