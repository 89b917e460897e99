#include "clmf/limit_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace clmf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

long long pair_count(long long k)
{
    return 2 * k * (k - 1);
}

}  // namespace

LimitMarginalSolution::LimitMarginalSolution(InitialData init, SecondMoment m2, double lambda, int k_max,
                                             LimitRegime regime)
    : init_(std::move(init)),
      m2_(m2),
      lambda_(lambda),
      k_max_(k_max),
      regime_(regime),
      tol_(m2.is_rational() ? 0.0 : 1e-9),
      memo_(k_max + 1)
{
    if (k_max < 1) throw std::invalid_argument("limit solution: k must be at least 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("limit solution: lambda must be positive");
    if (init_.max_order() >= 0 && init_.max_order() < k_max)
        throw std::invalid_argument("limit solution: initial data missing for some orders up to k");
    if (regime == LimitRegime::Order) tol_ = 0.0;
}

double LimitMarginalSolution::rate(const MultiIndex& n) const
{
    const long long k = static_cast<long long>(n.size());
    if (regime_ == LimitRegime::Order) return lambda_ * double(k * (k - 1));
    return lambda_ * m2_.eval(pair_count(k), index_sum_squares(n)) / 2.0;
}

double LimitMarginalSolution::stationary_rate(const MultiIndex& n) const
{
    const long s = index_sum(n);
    return lambda_ * m2_.eval(0, s * s) / 2.0;
}

const ExpPolynomial& LimitMarginalSolution::trajectory(const MultiIndex& n) const
{
    const int k = int(n.size());
    if (k < 1 || k > k_max_) throw std::out_of_range("limit solution: order out of range");
    auto& memo = memo_[k];
    if (auto it = memo.find(n); it != memo.end()) return it->second;

    const double alpha = rate(n);
    const bool tagged = regime_ == LimitRegime::Critical;
    const int home_tag = (tagged && k >= 2) ? k : 0;
    ExpPolynomial q = ExpPolynomial::exponential(init_(n), alpha, 0, home_tag);
    if (k >= 2) {
        ExpPolynomial gain;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) gain.add(cplx(2.0 * lambda_) * trajectory(fold(n, i, j)), tol_);
        q.add(exppoly_convolve(alpha, gain, tol_, tagged ? k : -1), tol_);
    }
    return memo.emplace(n, std::move(q)).first->second;
}

SpectralCoefficients LimitMarginalSolution::evaluate(int k, int radius, double t, std::size_t* missing) const
{
    SpectralCoefficients c(k, radius, "f_" + std::to_string(k));
    c.time = t;
    std::size_t miss = 0;
    for (std::size_t f = 0; f < c.size(); ++f) {
        try {
            c.values()[f] = trajectory(c.index_at(f))(t);
        } catch (const MissingIndex&) {
            c.values()[f] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
            ++miss;
        }
    }
    if (missing) *missing = miss;
    return c;
}

LimitMarginalSolution evolve_limit_marginal(const InitialData& init, const SecondMoment& m2, double lambda, int k)
{
    return LimitMarginalSolution(init, m2, lambda, k, LimitRegime::Critical);
}

LimitMarginalSolution evolve_order_regime(const InitialData& init, double lambda, int k)
{
    return LimitMarginalSolution(init, SecondMoment(1, 1), lambda, k, LimitRegime::Order);
}

bool is_resonant(const MultiIndex& n, const SecondMoment& m2)
{
    const long long k = static_cast<long long>(n.size());
    const long s = index_sum(n);
    return m2.vanishes(pair_count(k), index_sum_squares(n) - s * s);
}

double ACoefficients::operator()(const MultiIndex& n) const
{
    const int k = int(n.size());
    if (k < 1) throw std::invalid_argument("a_k: empty index");
    if (k == 1) return 1.0;
    if (int(memo_.size()) <= k) memo_.resize(k + 1);
    auto& memo = memo_[k];
    if (auto it = memo.find(n); it != memo.end()) return it->second;

    double value = 0.0;
    if (!is_resonant(n, m2_)) {
        std::vector<double> parts;
        parts.reserve(k * (k - 1) / 2);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) parts.push_back((*this)(fold(n, i, j)));
        // summing in sorted order makes the result exactly permutation invariant
        std::sort(parts.begin(), parts.end());
        double sum = 0.0;
        for (double p : parts) sum += p;
        const long s = index_sum(n);
        value = 4.0 * sum / m2_.eval(pair_count(k), index_sum_squares(n) - s * s);
    }
    memo.emplace(n, value);
    return value;
}

std::vector<double> ell_bounds(int K, const SecondMoment& m2)
{
    if (K < 1) throw std::invalid_argument("ell_bounds: K must be at least 1");
    std::vector<double> ell(K + 1, 1.0);
    for (int k = 2; k <= K; ++k) {
        const long long c = pair_count(k);
        long long fl = 0;
        bool integral = false;
        if (m2.is_rational()) {
            const __int128 num = static_cast<__int128>(c) * m2.denominator();
            integral = num % m2.numerator() == 0;
            fl = static_cast<long long>(num / m2.numerator());
        } else {
            const double x = double(c) / m2.value();
            integral = std::abs(x - std::round(x)) < 1e-9;
            fl = integral ? static_cast<long long>(std::llround(x)) : static_cast<long long>(std::floor(x));
        }
        if (integral) {
            ell[k] = double(c) / m2.value();
        } else {
            const double below = m2.eval(c, -fl);
            const double above = m2.eval(-c, fl + 1);
            ell[k] = double(c) / std::min(below, above);
        }
    }
    return ell;
}

std::vector<double> ell_products(int K, const SecondMoment& m2)
{
    const auto ell = ell_bounds(K, m2);
    std::vector<double> prod(K + 1, 1.0);
    for (int k = 1; k <= K; ++k) prod[k] = prod[k - 1] * ell[k];
    return prod;
}

std::vector<double> b_bound_constants(int K, const SecondMoment& m2)
{
    std::vector<double> C(K + 1, 0.0);
    if (K < 2) return C;
    const auto ell = ell_bounds(K, m2);
    const auto prod = ell_products(K, m2);
    C[2] = 1.0 + std::max(ell[2], 4.0 / (m2.value() * kE));
    for (int k = 3; k <= K; ++k) {
        const double first = 1.0 + prod[k - 1] * std::max(ell[k], double(pair_count(k)) / (m2.value() * kE));
        C[k] = std::max(first, k * C[k - 1] / 2.0);
    }
    return C;
}

std::vector<double> limit_distance_constants(int K, const SecondMoment& m2)
{
    const auto C = b_bound_constants(K, m2);
    const auto prod = ell_products(K, m2);
    std::vector<double> D(K + 1, 0.0);
    for (int k = 1; k <= K; ++k) D[k] = std::max(k >= 2 ? C[k] : 0.0, prod[k]);
    return D;
}

AbReport decompose_ab(const LimitMarginalSolution& sol, const std::vector<MultiIndex>& indices,
                      const std::vector<double>& times, double tol)
{
    if (sol.regime() != LimitRegime::Critical)
        throw std::invalid_argument("decompose_ab: needs a critical-regime solution");
    AbReport report;
    ACoefficients a(sol.m2());
    const auto C = b_bound_constants(std::max(sol.k_max(), 2), sol.m2());
    const double lambda = sol.lambda();
    for (const auto& n : indices) {
        const int k = int(n.size());
        const ExpPolynomial& q = sol.trajectory(n);
        const double beta = sol.stationary_rate(n);
        for (const auto& term : q.terms()) {
            const bool stationary_ok = term.tag == 0 && term.power == 0 && rates_collide(term.rate, beta, 1e-12);
            const bool family_ok = term.tag >= 2 && term.tag <= k;
            if (!stationary_ok && !family_ok)
                throw std::runtime_error("decompose_ab: ungroupable term at " + to_string(n));
        }
        AbEntry e;
        e.index = n;
        e.a_expected = a(n);
        const cplx c0 = q.with_tag(0).at_zero();
        const cplx f10 = sol.initial()({int(index_sum(n))});
        if (std::abs(f10) > 1e-14) {
            const cplx ratio = c0 / f10;
            e.a = ratio.real();
            report.worst_a_mismatch = std::max(report.worst_a_mismatch, std::abs(ratio - cplx(e.a_expected)));
        } else {
            report.worst_a_mismatch = std::max(report.worst_a_mismatch, std::abs(c0));
        }
        for (double t : times) {
            cplx rebuilt = e.a_expected * f10 * std::exp(-beta * t);
            for (int h = 2; h <= k; ++h) {
                const double grow = lambda * double(h * (h - 1));
                const cplx part = q.evaluate_tag(t, h);
                const double b = std::abs(part) * std::exp(grow * t);
                e.max_b = std::max(e.max_b, b);
                rebuilt += part;
            }
            e.decomposition_residual = std::max(e.decomposition_residual, std::abs(q(t) - rebuilt));
        }
        if (k >= 2) report.worst_b_ratio = std::max(report.worst_b_ratio, e.max_b / C[k]);
        report.worst_residual = std::max(report.worst_residual, e.decomposition_residual);
        report.entries.push_back(std::move(e));
    }
    report.pass = report.worst_a_mismatch <= tol && report.worst_b_ratio <= 1.0 && report.worst_residual <= tol;
    return report;
}

MultiIndex canonical_even_symmetric(const MultiIndex& n)
{
    MultiIndex a = n;
    std::sort(a.begin(), a.end());
    MultiIndex b = negate(n);
    std::sort(b.begin(), b.end());
    return std::min(a, b);
}

StationaryHierarchy::StationaryHierarchy(int K, SecondMoment m2)
    : K_(K), m2_(m2), a_(m2), xi_memo_(K + 1), nu_memo_(K + 1)
{
    if (K < 1) throw std::invalid_argument("stationary hierarchy: K must be at least 1");
}

double StationaryHierarchy::xi(const MultiIndex& n) const
{
    const int k = int(n.size());
    if (k < 1 || k > K_) throw std::out_of_range("xi: order out of range");
    if (k == 1) return 1.0;
    const MultiIndex key = canonical_even_symmetric(n);
    auto& memo = xi_memo_[k];
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double sum = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) sum += xi(fold(key, i, j));
    const double v = 4.0 * sum / m2_.eval(pair_count(k), index_sum_squares(key));
    memo.emplace(key, v);
    return v;
}

double StationaryHierarchy::nu(const MultiIndex& n) const
{
    const int k = int(n.size());
    if (k < 1 || k > K_) throw std::out_of_range("nu: order out of range");
    const MultiIndex key = canonical_even_symmetric(n);
    auto& memo = nu_memo_[k];
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const long s = index_sum(key);
    const long sq = index_sum_squares(key);
    const double den = m2_.eval(2LL * k * (k + 1), sq + s * s);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        MultiIndex m = key;
        m[i] = -int(s - key[i]);
        sum += 2.0 * (k + 1) * xi(m);
    }
    const double v = sum / den;
    memo.emplace(key, v);
    return v;
}

double StationaryHierarchy::f_infty(const MultiIndex& n) const
{
    const int k = int(n.size());
    if (k < 1 || k > K_) throw std::out_of_range("f_infty: order out of range");
    if (index_sum(n) != 0) return 0.0;
    return a_(n);
}

double StationaryHierarchy::f_infty_from_nu(const MultiIndex& n) const
{
    const int k = int(n.size());
    if (k < 2 || k > K_ + 1) throw std::out_of_range("f_infty_from_nu: order out of range");
    if (index_sum(n) != 0) return 0.0;
    double sum = 0.0;
    for (int l = 0; l < k; ++l) sum += nu(drop(n, l));
    return sum / k;
}

SpectralCoefficients StationaryHierarchy::nu_tensor(int k, int radius) const
{
    return SpectralCoefficients::from_function(
        k, radius, [this](const MultiIndex& n) { return cplx(nu(n), 0.0); }, "nu_" + std::to_string(k));
}

SpectralCoefficients StationaryHierarchy::f_infty_tensor(int k, int radius) const
{
    return SpectralCoefficients::from_function(
        k, radius, [this](const MultiIndex& n) { return cplx(f_infty(n), 0.0); }, "f_inf_" + std::to_string(k));
}

double StationaryHierarchy::cross_validate(int radius) const
{
    double worst = 0.0;
    for (int k = 2; k <= K_; ++k)
        for (const auto& n : cube(k, radius)) {
            if (index_sum(n) != 0) continue;
            worst = std::max(worst, std::abs(f_infty(n) - f_infty_from_nu(n)));
        }
    return worst;
}

std::vector<double> h_density(double m2, const std::vector<double>& grid, double tol)
{
    if (!(m2 > 0.0)) throw std::invalid_argument("h_density: m_2 must be positive");
    // 1/(m n^2 + 2) = 1/(m n^2) - 2/(m n^2 (m n^2 + 2)); the first part sums in closed form
    // and the remainder is bounded by 8/(3 m^2 M^3).
    const long M = std::max(16L, long(std::ceil(std::cbrt(8.0 / (3.0 * m2 * m2 * tol)))));
    std::vector<double> out;
    out.reserve(grid.size());
    for (double theta : grid) {
        double th = std::fmod(theta + kPi, 2.0 * kPi);
        if (th < 0) th += 2.0 * kPi;
        th = std::abs(th - kPi);
        const double basel = kPi * kPi / 6.0 - kPi * th / 2.0 + th * th / 4.0;
        double rest = 0.0;
        for (long n = M; n >= 1; --n) {
            const double mn2 = m2 * double(n) * double(n);
            rest += std::cos(double(n) * th) / (mn2 * (mn2 + 2.0));
        }
        out.push_back(1.0 + 4.0 * basel / m2 - 8.0 * rest);
    }
    return out;
}

NuDensity nu_density(const StationaryHierarchy& hier, int k, int radius, const std::vector<std::vector<double>>& grid)
{
    if (k < 1 || k > hier.K()) throw std::out_of_range("nu_density: order out of range");
    const auto indices = cube(k, radius);
    std::vector<double> weight(indices.size());
    for (std::size_t f = 0; f < indices.size(); ++f) {
        double w = hier.nu(indices[f]);
        for (int x : indices[f]) w *= 1.0 - double(std::abs(x)) / double(radius + 1);
        weight[f] = w;
    }
    auto eval = [&](const std::vector<double>& theta) {
        if (int(theta.size()) != k) throw std::invalid_argument("nu_density: grid point has wrong dimension");
        double v = 0.0;
        for (std::size_t f = 0; f < indices.size(); ++f) {
            double phase = 0.0;
            for (int r = 0; r < k; ++r) phase += indices[f][r] * theta[r];
            v += weight[f] * std::cos(phase);
        }
        return v;
    };
    NuDensity out;
    out.origin_value = eval(std::vector<double>(k, 0.0));
    out.min_value = std::numeric_limits<double>::infinity();
    for (const auto& p : grid) {
        const double v = eval(p);
        out.values.push_back(v);
        out.min_value = std::min(out.min_value, v);
        if (v > out.origin_value * (1.0 + 1e-12) + 1e-12) out.max_at_origin = false;
    }
    return out;
}

}  // namespace clmf
