#ifndef CLMF_FINITE_SYSTEM_HPP
#define CLMF_FINITE_SYSTEM_HPP

#include "clmf/exp_polynomial.hpp"
#include "clmf/initial_data.hpp"
#include "clmf/interaction.hpp"
#include "clmf/multi_index.hpp"
#include "clmf/spectral.hpp"

#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace clmf {

// Exact trajectories t -> F_{N,k}(n, t) of the finite-N marginals, built on
// demand and memoized per order.
class FiniteMarginalSolution {
public:
    FiniteMarginalSolution(InitialData init, ScalingSchedule sched, InteractionGenerator gen, int k_max);

    int k_max() const { return k_max_; }
    const ScalingSchedule& schedule() const { return sched_; }
    const InitialData& initial() const { return init_; }

    // Throws MissingIndex when the recursion needs unavailable initial data.
    const ExpPolynomial& trajectory(const MultiIndex& n) const;
    cplx operator()(const MultiIndex& n, double t) const { return trajectory(n)(t); }

    // Homogeneous decay rate at n.
    double rate(const MultiIndex& n) const;
    // lambda N / (N - 1)
    double prefactor() const;
    double g_hat(long n) const;

    // Order-k tensor on [-radius, radius]^k at time t; missing entries are NaN
    // and counted in `missing`.
    SpectralCoefficients evaluate(int k, int radius, double t, std::size_t* missing = nullptr) const;

    nlohmann::json terms_json(const MultiIndex& n) const;

private:
    InitialData init_;
    ScalingSchedule sched_;
    InteractionGenerator gen_;
    int k_max_;
    mutable std::unordered_map<long, double> ghat_cache_;
    mutable std::vector<std::unordered_map<MultiIndex, ExpPolynomial, MultiIndexHash>> memo_;
};

FiniteMarginalSolution evolve_finite_marginal(const InitialData& init, const ScalingSchedule& sched,
                                              const InteractionGenerator& gen, int k);

struct GapEntry {
    MultiIndex index;
    double t = 0.0;
    double gap = 0.0;
};

class LimitMarginalSolution;

// |F_{N,k}(n, t) - f_k(n, t)| for every index and time.
std::vector<GapEntry> finite_vs_limit_gap(const FiniteMarginalSolution& fin, const LimitMarginalSolution& lim,
                                          const std::vector<MultiIndex>& indices, const std::vector<double>& times);

nlohmann::json exppoly_to_json(const ExpPolynomial& q);

}  // namespace clmf

#endif
