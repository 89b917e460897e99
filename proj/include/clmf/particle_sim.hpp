#ifndef CLMF_PARTICLE_SIM_HPP
#define CLMF_PARTICLE_SIM_HPP

#include "clmf/finite_system.hpp"
#include "clmf/initial_data.hpp"
#include "clmf/interaction.hpp"
#include "clmf/multi_index.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace clmf {

// N angles in [-pi, pi) evolving under the rescaled jump process.
struct ParticleEnsemble {
    int N = 0;
    double time = 0.0;
    std::vector<double> angles;
    std::uint64_t stream = 0;  // per-run seed
    std::uint64_t events = 0;
};

// Seed of run `run` derived from the master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t run);

// Advances the ensemble to time `until`: events arrive at total rate lambda N^2;
// each picks an ordered pair (leader, follower) uniformly and sets the
// follower to leader + noise.
void advance(ParticleEnsemble& e, double until, const ScalingSchedule& sched, const InteractionGenerator& gen,
             std::mt19937_64& rng);

struct SimulationConfig {
    double horizon = 1.0;
    std::vector<double> times;  // snapshot grid within [0, horizon]
    int runs = 1;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct SimulationResult {
    int N = 0;
    std::vector<double> times;
    // angles[run][snapshot] holds N angles
    std::vector<std::vector<std::vector<double>>> angles;
    std::vector<std::uint64_t> events;  // per run, over [0, horizon]
};

SimulationResult simulate(const ScalingSchedule& sched, const InteractionGenerator& gen, const InitialData& init,
                          const SimulationConfig& cfg);

struct EmpiricalEstimate {
    MultiIndex index;
    double t = 0.0;
    cplx mean;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Average of exp(-i sum n_r theta_{i_r}) over random distinct k-tuples; the
// standard error is taken across runs.  tuples = 0 uses every particle (k = 1 only).
std::vector<EmpiricalEstimate> empirical_coefficients(const SimulationResult& sim, const std::vector<MultiIndex>& indices,
                                                      int tuples, std::uint64_t seed);

struct ComparisonEntry {
    MultiIndex index;
    double t = 0.0;
    cplx empirical;
    cplx exact;
    double std_error = 0.0;
    bool within = true;
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    double pass_rate = 1.0;
};

ComparisonReport compare_to_exact(const std::vector<EmpiricalEstimate>& est, const FiniteMarginalSolution& sol,
                                  double z = 4.0);

}  // namespace clmf

#endif
