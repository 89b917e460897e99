#include "clmf/finite_system.hpp"
#include "clmf/limit_dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clmf {

FiniteMarginalSolution::FiniteMarginalSolution(InitialData init, ScalingSchedule sched, InteractionGenerator gen,
                                               int k_max)
    : init_(std::move(init)), sched_(sched), gen_(std::move(gen)), k_max_(k_max), memo_(k_max + 1)
{
    if (k_max < 1) throw std::invalid_argument("finite system: k must be at least 1");
    if (sched_.N < k_max + 1) throw std::invalid_argument("finite system: N must exceed k");
    if (init_.max_order() >= 0 && init_.max_order() < k_max)
        throw std::invalid_argument("finite system: initial data missing for some orders up to k");
}

double FiniteMarginalSolution::prefactor() const
{
    return sched_.lambda * double(sched_.N) / double(sched_.N - 1);
}

double FiniteMarginalSolution::g_hat(long n) const
{
    n = std::abs(n);
    auto it = ghat_cache_.find(n);
    if (it != ghat_cache_.end()) return it->second;
    const double v = clmf::g_hat(gen_, sched_.epsilon, n);
    ghat_cache_.emplace(n, v);
    return v;
}

double FiniteMarginalSolution::rate(const MultiIndex& n) const
{
    const long k = long(n.size());
    double loss = 0.0;
    for (int x : n) loss += 1.0 - g_hat(x);
    return prefactor() * (double(sched_.N - k) * loss + double(k * (k - 1)));
}

const ExpPolynomial& FiniteMarginalSolution::trajectory(const MultiIndex& n) const
{
    const int k = int(n.size());
    if (k < 1 || k > k_max_) throw std::out_of_range("finite system: order out of range");
    auto& memo = memo_[k];
    if (auto it = memo.find(n); it != memo.end()) return it->second;

    const double alpha = rate(n);
    ExpPolynomial q = ExpPolynomial::exponential(init_(n), alpha);
    if (k >= 2) {
        ExpPolynomial gain;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                const double w = prefactor() * (g_hat(n[i]) + g_hat(n[j]));
                if (w == 0.0) continue;
                gain.add(cplx(w) * trajectory(fold(n, i, j)));
            }
        q.add(exppoly_convolve(alpha, gain));
    }
    return memo.emplace(n, std::move(q)).first->second;
}

SpectralCoefficients FiniteMarginalSolution::evaluate(int k, int radius, double t, std::size_t* missing) const
{
    SpectralCoefficients c(k, radius, "F_N," + std::to_string(k));
    c.time = t;
    std::size_t miss = 0;
    for (std::size_t f = 0; f < c.size(); ++f) {
        const MultiIndex n = c.index_at(f);
        try {
            c.values()[f] = trajectory(n)(t);
        } catch (const MissingIndex&) {
            c.values()[f] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
            ++miss;
        }
    }
    if (missing) *missing = miss;
    return c;
}

nlohmann::json FiniteMarginalSolution::terms_json(const MultiIndex& n) const
{
    return exppoly_to_json(trajectory(n));
}

FiniteMarginalSolution evolve_finite_marginal(const InitialData& init, const ScalingSchedule& sched,
                                              const InteractionGenerator& gen, int k)
{
    return FiniteMarginalSolution(init, sched, gen, k);
}

std::vector<GapEntry> finite_vs_limit_gap(const FiniteMarginalSolution& fin, const LimitMarginalSolution& lim,
                                          const std::vector<MultiIndex>& indices, const std::vector<double>& times)
{
    std::vector<GapEntry> out;
    for (const auto& n : indices) {
        if (int(n.size()) > fin.k_max() || int(n.size()) > lim.k_max())
            throw std::invalid_argument("finite_vs_limit_gap: index order exceeds a solution's order");
        for (double t : times) out.push_back({n, t, std::abs(fin(n, t) - lim(n, t))});
    }
    return out;
}

nlohmann::json exppoly_to_json(const ExpPolynomial& q)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& term : q.terms())
        arr.push_back({{"coeff_re", term.coef.real()},
                       {"coeff_im", term.coef.imag()},
                       {"rate", term.rate},
                       {"power", term.power},
                       {"tag", term.tag}});
    return arr;
}

}  // namespace clmf
