#include "clmf/particle_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace clmf {

namespace {

std::mt19937_64 stream_rng(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0)
{
    std::seed_seq seq{std::uint32_t(a), std::uint32_t(a >> 32), std::uint32_t(b), std::uint32_t(b >> 32),
                      std::uint32_t(c), std::uint32_t(c >> 32)};
    return std::mt19937_64(seq);
}

template <class Task>
void parallel_for(int count, int threads, Task task)
{
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count && !failed; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t run)
{
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(run), std::uint32_t(run >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t(out[0]) << 32) | out[1];
}

void advance(ParticleEnsemble& e, double until, const ScalingSchedule& sched, const InteractionGenerator& gen,
             std::mt19937_64& rng)
{
    if (e.N < 2) throw std::invalid_argument("particle system needs N >= 2");
    const double total_rate = sched.lambda * double(e.N) * double(e.N);
    std::exponential_distribution<double> clock(total_rate);
    std::uniform_int_distribution<int> leader_pick(0, e.N - 1);
    std::uniform_int_distribution<int> follower_pick(0, e.N - 2);
    while (true) {
        const double next = e.time + clock(rng);
        if (next > until) break;
        e.time = next;
        const int leader = leader_pick(rng);
        int follower = follower_pick(rng);
        if (follower >= leader) ++follower;
        e.angles[follower] = wrap_angle(e.angles[leader] + sample_noise(gen, sched.epsilon, rng));
        ++e.events;
    }
    // memorylessness lets the clock restart at `until`
    e.time = until;
}

SimulationResult simulate(const ScalingSchedule& sched, const InteractionGenerator& gen, const InitialData& init,
                          const SimulationConfig& cfg)
{
    if (sched.N < 2) throw std::invalid_argument("simulate: N must be at least 2");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
    if (cfg.runs < 1) throw std::invalid_argument("simulate: runs must be positive");
    if (!init.can_sample()) throw std::invalid_argument("simulate: initial data " + init.describe() + " cannot be sampled");
    std::vector<double> times = cfg.times;
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (t < 0.0 || t > cfg.horizon) throw std::invalid_argument("simulate: snapshot time outside [0, horizon]");

    SimulationResult res;
    res.N = sched.N;
    res.times = times;
    res.angles.resize(cfg.runs);
    res.events.resize(cfg.runs);
    parallel_for(cfg.runs, cfg.threads, [&](int run) {
        ParticleEnsemble e;
        e.N = sched.N;
        e.stream = derive_seed(cfg.seed, std::uint64_t(run));
        std::mt19937_64 rng(e.stream);
        init.sample(e.N, rng, e.angles);
        auto& snaps = res.angles[run];
        snaps.reserve(times.size());
        for (double t : times) {
            advance(e, t, sched, gen, rng);
            snaps.push_back(e.angles);
        }
        advance(e, cfg.horizon, sched, gen, rng);
        res.events[run] = e.events;
    });
    return res;
}

std::vector<EmpiricalEstimate> empirical_coefficients(const SimulationResult& sim, const std::vector<MultiIndex>& indices,
                                                      int tuples, std::uint64_t seed)
{
    const int R = int(sim.angles.size());
    if (R == 0) throw std::invalid_argument("empirical_coefficients: empty simulation");
    for (const auto& n : indices) {
        if (n.empty() || int(n.size()) > sim.N) throw std::invalid_argument("empirical_coefficients: k exceeds N");
        if (tuples == 0 && n.size() != 1)
            throw std::invalid_argument("empirical_coefficients: exhaustive averaging needs k = 1");
    }
    std::vector<EmpiricalEstimate> out;
    for (std::size_t s = 0; s < sim.times.size(); ++s) {
        // per-run means, one row per index
        std::vector<std::vector<cplx>> means(indices.size(), std::vector<cplx>(R));
        int kmax = 1;
        for (const auto& n : indices) kmax = std::max(kmax, int(n.size()));
        for (int run = 0; run < R; ++run) {
            const auto& th = sim.angles[run][s];
            if (tuples == 0) {
                for (std::size_t q = 0; q < indices.size(); ++q) {
                    cplx acc = 0.0;
                    for (double x : th) acc += std::polar(1.0, -double(indices[q][0]) * x);
                    means[q][run] = acc / double(th.size());
                }
                continue;
            }
            auto rng = stream_rng(seed, std::uint64_t(run), std::uint64_t(s));
            std::uniform_int_distribution<int> pick(0, sim.N - 1);
            std::vector<cplx> acc(indices.size(), 0.0);
            std::vector<int> tuple(kmax);
            for (int m = 0; m < tuples; ++m) {
                for (int r = 0; r < kmax; ++r) {
                    int c;
                    do {
                        c = pick(rng);
                    } while (std::find(tuple.begin(), tuple.begin() + r, c) != tuple.begin() + r);
                    tuple[r] = c;
                }
                for (std::size_t q = 0; q < indices.size(); ++q) {
                    double phase = 0.0;
                    for (std::size_t r = 0; r < indices[q].size(); ++r) phase += indices[q][r] * th[tuple[r]];
                    acc[q] += std::polar(1.0, -phase);
                }
            }
            for (std::size_t q = 0; q < indices.size(); ++q) means[q][run] = acc[q] / double(tuples);
        }
        for (std::size_t q = 0; q < indices.size(); ++q) {
            EmpiricalEstimate e;
            e.index = indices[q];
            e.t = sim.times[s];
            cplx mean = 0.0;
            for (const auto& v : means[q]) mean += v;
            mean /= double(R);
            double var = 0.0;
            for (const auto& v : means[q]) var += std::norm(v - mean);
            e.mean = mean;
            e.std_error = R > 1 ? std::sqrt(var / double(R - 1) / double(R)) : 0.0;
            e.samples = std::size_t(R) * std::size_t(tuples == 0 ? sim.N : tuples);
            out.push_back(std::move(e));
        }
    }
    return out;
}

ComparisonReport compare_to_exact(const std::vector<EmpiricalEstimate>& est, const FiniteMarginalSolution& sol,
                                  double z)
{
    ComparisonReport rep;
    std::size_t good = 0;
    for (const auto& e : est) {
        if (int(e.index.size()) > sol.k_max()) throw std::invalid_argument("compare_to_exact: order mismatch");
        ComparisonEntry c;
        c.index = e.index;
        c.t = e.t;
        c.empirical = e.mean;
        c.exact = sol(e.index, e.t);
        c.std_error = e.std_error;
        c.within = std::abs(c.empirical - c.exact) <= std::max(z * e.std_error, 1e-12);
        good += c.within;
        rep.entries.push_back(std::move(c));
    }
    rep.pass_rate = est.empty() ? 1.0 : double(good) / double(est.size());
    return rep;
}

}  // namespace clmf
