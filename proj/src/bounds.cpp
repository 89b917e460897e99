#include "clmf/bounds.hpp"
#include "clmf/second_moment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/zeta.hpp>

namespace clmf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double zeta_three_halves()
{
    static const double z = boost::math::zeta(1.5);
    return z;
}

void compositions(int k, int r, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (r == 1) {
        cur.push_back(k);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int first = 1; first <= k - (r - 1); ++first) {
        cur.push_back(first);
        compositions(k - first, r - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> level_sets(int k, int r)
{
    if (k < 1 || r < 1 || r > k) throw std::invalid_argument("level_sets: need 1 <= r <= k");
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    compositions(k, r, cur, out);
    return out;
}

MultiIndex s_map(const std::vector<int>& p, const std::vector<int>& sigma, const MultiIndex& n)
{
    const int k = int(n.size());
    if (int(sigma.size()) != k) throw std::invalid_argument("s_map: permutation has wrong length");
    std::vector<int> seen(k, 0);
    for (int s : sigma) {
        if (s < 0 || s >= k || seen[s]) throw std::invalid_argument("s_map: sigma is not a permutation");
        seen[s] = 1;
    }
    if (p.empty() || std::accumulate(p.begin(), p.end(), 0) != k ||
        std::any_of(p.begin(), p.end(), [](int x) { return x < 1; }))
        throw std::invalid_argument("s_map: p is not a composition of k");
    MultiIndex out;
    int pos = 0;
    for (int block : p) {
        long sum = 0;
        for (int m = 0; m < block; ++m) sum += n[sigma[pos++]];
        out.push_back(int(sum));
    }
    return out;
}

double quadratic_sum_rhs(double m, long K)
{
    if (!(m > 0.0)) throw std::invalid_argument("quadratic sum: m must be positive");
    const SecondMoment sm(m);
    double head;
    long fl;
    bool integral;
    if (sm.is_rational()) {
        // K/m = K q / p
        const __int128 num = static_cast<__int128>(K) * sm.denominator();
        const __int128 p = sm.numerator();
        __int128 f = num / p;
        if (num % p != 0 && num < 0) --f;
        fl = long(f);
        integral = num % p == 0;
    } else {
        const double x = double(K) / m;
        integral = std::abs(x - std::round(x)) < 1e-12;
        fl = long(std::floor(x));
    }
    if (integral) {
        head = 6.0 / m;
    } else {
        const double below = sm.eval(K, -fl);
        const double above = sm.eval(-K, fl + 1);
        head = 6.0 / std::min(below, above);
    }
    return head + 16.0 / m * zeta_three_halves();
}

double quadratic_sum_brute(double m, long A, long B, long K, long n_max)
{
    if (!(m > 0.0)) throw std::invalid_argument("quadratic sum: m must be positive");
    const double nm = double(n_max);
    if (double(std::abs(A)) * nm + double(std::abs(B)) > nm * nm / 4.0 || double(std::abs(K)) > m * nm * nm / 4.0)
        throw std::invalid_argument("quadratic sum: truncation too short for the tail estimate");
    const SecondMoment sm(m);
    double sum = 0.0;
    for (long n = -n_max; n <= n_max; ++n) {
        const long long quad = static_cast<long long>(n) * n + static_cast<long long>(A) * n + B;
        if (sm.vanishes(K, quad)) continue;
        sum += 1.0 / std::abs(sm.eval(K, quad));
    }
    // for |n| > n_max the summand is at most 4/(m n^2)
    return sum + 8.0 / (m * nm);
}

QuadraticSumResult quadratic_sum_bound(double m, long K, long A, long B, long n_max)
{
    QuadraticSumResult r;
    r.bound = quadratic_sum_rhs(m, K);
    r.brute = quadratic_sum_brute(m, A, B, K, n_max);
    r.pass = r.brute <= r.bound;
    return r;
}

ConstantsLedger constants_ledger(const InteractionGenerator& gen, int N, int k, int l, double lambda, double alpha)
{
    if (l < 3) throw std::invalid_argument("constants: l must be at least 3");
    if (N < 2 || k < 1) throw std::invalid_argument("constants: need N >= 2 and k >= 1");
    ConstantsLedger L;
    L.N = N;
    L.k = k;
    L.l = l;
    L.lambda = lambda;
    L.epsilon = 1.0 / std::sqrt(double(N));
    const int mn = std::min(l / 2, 2);
    L.alpha = alpha > 0.0 ? alpha : std::pow(double(N), -1.0 / (2.0 + mn));
    L.m2 = gen.m2();
    L.ml = gen.moment(l);
    L.m3 = gen.moment(3);
    L.m4 = l >= 4 ? gen.moment(4) : 0.0;
    L.p = gen.p();
    L.q = gen.q();
    L.g_norm = gen.lp_norm();
    L.root_l = std::pow(4.0 * L.ml, 1.0 / l);

    const double pil = std::pow(kPi, l);
    const double Nd = double(N);
    const double Npow = std::pow(Nd, (2.0 - l) / 2.0);
    const double q = L.q;
    const double G = std::pow(L.g_norm, 2.0 * q) * std::pow(L.root_l + 2.0 * kPi, 2.0);
    const double a = L.alpha;
    const double a2 = a * a;

    L.meets_eps = std::pow(L.epsilon, l) * L.ml < pil;
    L.tau = L.meets_eps ? tau_N(gen, L.epsilon, l) : std::numeric_limits<double>::infinity();

    L.N0 = std::max(std::pow(2.0 * L.ml, l / 2.0) / (kPi * kPi),
                    std::pow(32.0 * L.ml / (pil * std::max(8.0, L.m2)), 2.0 / (l - 2)));
    L.N1 = std::max({L.N0, 2.0 * k, std::pow(96.0 * L.ml * k / (pil * L.m2), 2.0 / (l - 2))});

    const double cap_mid = l == 3 ? L.m2 / (8.0 * L.m3) : std::sqrt(L.m2 / (2.0 * L.m4));
    L.alpha_cap = std::min({std::pow(4.0, q + 1.0) * std::pow(L.g_norm, q), cap_mid, 1.0});
    const double X = std::pow(4.0, 2.0 * (q + 3.0)) * L.ml * G / std::pow(kPi, l + 2);
    L.alpha_floor_lhs = std::pow(Nd, l / 2.0) * a2;
    L.alpha_floor_rhs = X;
    const double expo = 1.0 / (l / 2.0 - 2.0 / (2.0 + mn));
    L.frak_N0 = std::max(std::pow(X, expo), std::pow(L.alpha_cap, -(2.0 + mn)));
    L.threshold = std::max(L.frak_N0, L.N1);
    L.meets_N = Nd >= L.threshold;
    L.meets_alpha_cap = a <= L.alpha_cap;
    L.meets_alpha_floor = L.alpha_floor_lhs >= X;

    L.kappa = l == 3 ? 3 : 2;
    L.gamma = std::min(kPi * kPi / (2.0 * std::pow(4.0, 2.0 * (q + 2.0)) * G), L.m2 / 2.0);

    if (l == 3) {
        L.e1 = 4.0 / (3.0 * pil * L.m2 * kE) * (12.0 * L.ml * Npow + pil * L.m3 * a);
        L.e2 = 8.0 * (12.0 * k * L.ml * Npow + pil * L.m3 * a) / (3.0 * pil * L.m2 * kE);
        L.e3 = (24.0 * k * L.ml * Npow + 2.0 * pil * L.m3 * a + 3.0 * pil * L.m2) / (6.0 * pil);
        L.c1 = 4.0 * std::max(12.0 * L.ml, pil * L.m3) / (3.0 * pil * L.m2 * kE);
        L.zeta = std::max({24.0 * L.ml, 2.0 * pil * L.m3, 3.0 * pil * L.m2}) / (6.0 * pil);
    } else {
        L.e1 = 1.0 / (3.0 * pil * L.m2 * kE) * (48.0 * L.ml * Npow + pil * L.m4 * a2);
        L.e2 = 2.0 * (48.0 * k * L.ml * Npow + pil * L.m4 * a2) / (3.0 * pil * L.m2 * kE);
        L.e3 = (96.0 * k * L.ml * Npow + 2.0 * pil * L.m4 * a2 + 12.0 * pil * L.m2) / (24.0 * pil);
        L.c1 = std::max(48.0 * L.ml, pil * L.m4) / (3.0 * pil * L.m2 * kE);
        L.zeta = std::max({96.0 * L.ml, 2.0 * pil * L.m4, 12.0 * pil * L.m2}) / (24.0 * pil);
    }
    const double m2 = L.m2;
    const double spread = std::pow(4.0, 2.0 * (q + 2.0) + 1.0) * G / (kPi * kPi);
    L.c2.assign(k + 1, 0.0);
    for (int j = 1; j <= k; ++j) L.c2[j] = (2.0 + j * (j + 1.0)) * spread + 8.0 / m2;
    L.c3 = std::max({2.0 * L.c1, 32.0 / (kE * kE), 2.0 * m2 / kE, 16.0 * m2 * m2 / (kE * kE)});
    L.c4 = std::max({L.zeta, 192.0 * L.c1 / m2, 16.0 / kE, 256.0 / (m2 * kE * kE), 128.0 * m2 / (kE * kE), 2.0});
    L.frak_c.assign(k + 1, 0.0);
    L.frak_c[1] = L.c1;
    for (int j = 1; j < k; ++j)
        L.frak_c[j + 1] = L.c2[j + 1] + L.c3 + L.c4 + 2.0 * L.frak_c[j] + spread + 4.0 / m2;
    L.cal_C = (double(k) * k + k + 3.0) * L.frak_c[k];

    const SecondMoment sm(m2);
    const int K = std::max(k, 2);
    L.ell = ell_bounds(K, sm);
    L.ell_prod = ell_products(K, sm);
    L.C = b_bound_constants(K, sm);
    L.D = limit_distance_constants(K, sm);
    return L;
}

nlohmann::json ConstantsLedger::to_json() const
{
    return {{"N", N},
            {"k", k},
            {"l", l},
            {"lambda", lambda},
            {"epsilon", epsilon},
            {"alpha", alpha},
            {"m2", m2},
            {"m_l", ml},
            {"m3", m3},
            {"m4", m4},
            {"p", p},
            {"q", q},
            {"g_norm", g_norm},
            {"tau", tau},
            {"N0", N0},
            {"N1", N1},
            {"frak_N0", frak_N0},
            {"threshold", threshold},
            {"kappa", kappa},
            {"gamma", gamma},
            {"alpha_cap", alpha_cap},
            {"alpha_floor_lhs", alpha_floor_lhs},
            {"alpha_floor_rhs", alpha_floor_rhs},
            {"e1", e1},
            {"e2", e2},
            {"e3", e3},
            {"c1", c1},
            {"c2", c2},
            {"c3", c3},
            {"c4", c4},
            {"zeta", zeta},
            {"frak_c", frak_c},
            {"cal_C", cal_C},
            {"ell", ell},
            {"ell_prod", ell_prod},
            {"C", C},
            {"D", D},
            {"meets_N", meets_N},
            {"meets_alpha_cap", meets_alpha_cap},
            {"meets_alpha_floor", meets_alpha_floor},
            {"meets_eps", meets_eps},
            {"hypotheses_met", hypotheses_met()}};
}

nlohmann::json BoundReport::to_json() const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back({{"kind", c.kind},
                       {"index", c.index},
                       {"t", c.t},
                       {"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"pass", c.pass},
                       {"slack", c.slack()}});
    return {{"constants", constants}, {"informational", informational}, {"violations", violations}, {"checks", arr}};
}

std::string BoundReport::to_csv() const
{
    std::ostringstream os;
    os.precision(17);
    os << "kind,index,t,lhs,rhs,pass,slack\n";
    for (const auto& c : checks) {
        std::string idx;
        for (std::size_t i = 0; i < c.index.size(); ++i) idx += (i ? " " : "") + std::to_string(c.index[i]);
        os << c.kind << ',' << idx << ',' << c.t << ',' << c.lhs << ',' << c.rhs << ',' << (c.pass ? 1 : 0) << ','
           << c.slack() << '\n';
    }
    return os.str();
}

double limit_distance_rhs(double D_k, double lambda, double m2, double t)
{
    if (!(t > 0.0)) throw std::invalid_argument("limit distance bound is singular at t = 0");
    const double x = std::exp(-2.0 * lambda * t);
    return D_k * (x / (1.0 - x) + std::exp(-lambda * m2 * t / 2.0));
}

BoundReport limit_distance_check(const LimitMarginalSolution& lim, const StationaryHierarchy& hier,
                                 const std::vector<MultiIndex>& indices, const std::vector<double>& times)
{
    if (lim.regime() != LimitRegime::Critical) throw std::invalid_argument("limit_distance_check: critical regime only");
    if (std::abs(lim.m2().value() - hier.m2().value()) > 1e-15)
        throw std::invalid_argument("limit_distance_check: m_2 mismatch");
    const int K = std::max(lim.k_max(), 2);
    const auto D = limit_distance_constants(K, lim.m2());
    BoundReport rep;
    rep.constants = {{"m2", lim.m2().value()}, {"lambda", lim.lambda()}, {"D", D}};
    for (const auto& n : indices) {
        const int k = int(n.size());
        if (k > lim.k_max() || k > hier.K()) throw std::invalid_argument("limit_distance_check: order mismatch");
        for (double t : times) {
            BoundCheck c;
            c.kind = "limit";
            c.index = n;
            c.t = t;
            c.lhs = std::abs(lim(n, t) - hier.f_infty(n));
            c.rhs = limit_distance_rhs(D[k], lim.lambda(), lim.m2().value(), t);
            c.pass = c.lhs <= c.rhs;
            rep.violations += !c.pass;
            rep.checks.push_back(std::move(c));
        }
    }
    return rep;
}

double level_set_initial_gap(const InitialData& finite_init, const InitialData& limit_init, const MultiIndex& n)
{
    const int k = int(n.size());
    double worst = 0.0;
    std::vector<int> sigma(k);
    for (int r = 1; r < k; ++r)
        for (const auto& p : level_sets(k, r)) {
            std::iota(sigma.begin(), sigma.end(), 0);
            do {
                const MultiIndex s = s_map(p, sigma, n);
                worst = std::max(worst, std::abs(finite_init(s) - limit_init(s)));
            } while (std::next_permutation(sigma.begin(), sigma.end()));
        }
    return worst;
}

BoundReport finite_distance_check(const FiniteMarginalSolution& fin, const LimitMarginalSolution& lim,
                                  const StationaryHierarchy& hier, const ConstantsLedger& L,
                                  const std::vector<MultiIndex>& indices, const std::vector<double>& times)
{
    if (fin.schedule().N != L.N) throw std::invalid_argument("finite_distance_check: ledger built for another N");
    BoundReport rep;
    rep.constants = L.to_json();
    rep.informational = !L.hypotheses_met();
    const double lambda = L.lambda;
    const double m2 = L.m2;
    const double Nd = double(L.N);
    const double a = L.alpha;
    const double a2 = a * a;
    const double Npow = std::pow(Nd, (2.0 - L.l) / 2.0);
    const int mn = std::min(L.l / 2, 2);
    const double G = std::pow(L.g_norm, 2.0 * L.q) * std::pow(L.root_l + 2.0 * kPi, 2.0);
    const double spread_rate = Nd * a2 * kPi * kPi / (2.0 * std::pow(4.0, 2.0 * (L.q + 2.0)) * G);
    const double rootN = std::pow(Nd, 1.0 / L.kappa);
    for (const auto& n : indices) {
        const int k = int(n.size());
        if (k > L.k || k > fin.k_max() || k > lim.k_max() || k > hier.K())
            throw std::invalid_argument("finite_distance_check: order exceeds the ledger or a solution");
        const double gap0 = std::abs(fin.initial()(n) - lim.initial()(n));
        const double level = level_set_initial_gap(fin.initial(), lim.initial(), n);
        const double level_term = std::pow(Nd / (Nd - 1.0), k - 1) * (k - 1) * level;
        const double kk = double(k) * (k - 1);
        const double fc = L.frak_c[k];
        const double calC = (double(k) * k + k + 3.0) * fc;
        for (double t : times) {
            const cplx F = fin(n, t);
            {
                BoundCheck c;
                c.kind = "finite-limit";
                c.index = n;
                c.t = t;
                c.lhs = std::abs(F - lim(n, t));
                c.rhs = std::exp(-lambda * (2.0 * kk + m2) * t / 2.0) * gap0 + level_term +
                        std::exp(-lambda * kk * t) *
                            (std::exp(-lambda * spread_rate * t) + std::exp(-lambda * m2 * Nd * a2 * t / 2.0)) +
                        fc * (1.0 / Nd + (k * Npow + 1.0) * a2 + k * Npow + std::pow(a, mn) + kk / (Nd * a2));
                c.pass = c.lhs <= c.rhs;
                rep.violations += !c.pass;
                rep.checks.push_back(std::move(c));
            }
            if (t > 0.0) {
                BoundCheck c;
                c.kind = "quantitative";
                c.index = n;
                c.t = t;
                c.lhs = std::abs(F - hier.f_infty(n));
                c.rhs = gap0 + level_term + 2.0 * std::exp(-lambda * kk * t) * std::exp(-lambda * L.gamma * rootN * t) +
                        calC / rootN + limit_distance_rhs(L.D[k], lambda, m2, t);
                c.pass = c.lhs <= c.rhs;
                rep.violations += !c.pass;
                rep.checks.push_back(std::move(c));
            }
        }
    }
    return rep;
}

}  // namespace clmf
