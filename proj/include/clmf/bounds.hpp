#ifndef CLMF_BOUNDS_HPP
#define CLMF_BOUNDS_HPP

#include "clmf/finite_system.hpp"
#include "clmf/interaction.hpp"
#include "clmf/limit_dynamics.hpp"
#include "clmf/multi_index.hpp"

#include <string>
#include <vector>

#include "json.hpp"

namespace clmf {

// Compositions of k into r positive parts, in lexicographic order.
std::vector<std::vector<int>> level_sets(int k, int r);

// Consecutive block sums of (n_{sigma(1)}, ..., n_{sigma(k)}) with block sizes p.
// sigma is a 0-based permutation of {0, ..., k-1}.
MultiIndex s_map(const std::vector<int>& p, const std::vector<int>& sigma, const MultiIndex& n);

struct QuadraticSumResult {
    double bound = 0.0;
    double brute = 0.0;  // truncated sum plus tail estimate
    bool pass = true;
};

// Right-hand side of the quadratic-sum estimate for given m > 0 and integer K.
double quadratic_sum_rhs(double m, long K);
// sum over |n| <= n_max, m(n^2 + A n + B) + K != 0, of 1/|m(n^2 + A n + B) + K|,
// plus 8/(m n_max) for the tail.
double quadratic_sum_brute(double m, long A, long B, long K, long n_max = 1000000);
QuadraticSumResult quadratic_sum_bound(double m, long K, long A, long B, long n_max = 1000000);

struct ConstantsLedger {
    int N = 0, k = 1, l = 3;
    double lambda = 1.0, epsilon = 0.0, alpha = 0.0;
    double m2 = 0.0, ml = 0.0, m3 = 0.0, m4 = 0.0, p = 2.0, q = 2.0, g_norm = 0.0;
    double root_l = 0.0;  // (4 m_l)^{1/l}
    double tau = 0.0;
    double N0 = 0.0, N1 = 0.0, frak_N0 = 0.0, threshold = 0.0;
    int kappa = 3;
    double gamma = 0.0;
    double alpha_cap = 0.0, alpha_floor_lhs = 0.0, alpha_floor_rhs = 0.0;
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    double c1 = 0.0, c3 = 0.0, c4 = 0.0, zeta = 0.0;
    std::vector<double> c2;      // c2[j] for order j, j = 0..k
    std::vector<double> frak_c;  // frak_c[j], j = 1..k
    double cal_C = 0.0;          // (k^2 + k + 3) frak_c_k
    std::vector<double> ell, ell_prod, C, D;

    bool meets_N = false, meets_alpha_cap = false, meets_alpha_floor = false, meets_eps = false;
    bool hypotheses_met() const { return meets_N && meets_alpha_cap && meets_alpha_floor && meets_eps; }

    nlohmann::json to_json() const;
};

// Every constant for (g, N, k, l) with epsilon = 1/sqrt(N) and
// alpha_N = N^{-1/(2 + min(floor(l/2), 2))} unless alpha > 0 is supplied.
ConstantsLedger constants_ledger(const InteractionGenerator& gen, int N, int k, int l, double lambda = 1.0,
                                 double alpha = 0.0);

struct BoundCheck {
    std::string kind;
    MultiIndex index;
    double t = 0.0;
    double lhs = 0.0, rhs = 0.0;
    bool pass = true;
    double slack() const { return rhs - lhs; }
};

struct BoundReport {
    nlohmann::json constants;
    std::vector<BoundCheck> checks;
    bool informational = false;  // hypotheses unmet; verdicts are not assertions
    std::size_t violations = 0;
    bool pass() const { return violations == 0; }
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

double limit_distance_rhs(double D_k, double lambda, double m2, double t);

// |f_k(n, t) - f_{k,inf}(n)| against D_k (e^{-2 lambda t}/(1 - e^{-2 lambda t}) + e^{-lambda m_2 t/2}).
BoundReport limit_distance_check(const LimitMarginalSolution& lim, const StationaryHierarchy& hier,
                                 const std::vector<MultiIndex>& indices, const std::vector<double>& times);

// Initial-data term: max over r < k, p in L_k(r), sigma of |F_{N,r}(s(n), 0) - f_{r,0}(s(n))|.
double level_set_initial_gap(const InitialData& finite_init, const InitialData& limit_init, const MultiIndex& n);

// Two checks per index and time:
//   "finite-limit":  |F_{N,k} - f_k|       against the finite-versus-limit estimate,
//   "quantitative": |F_{N,k} - f_{k,inf}| against the quantitative convergence estimate.
BoundReport finite_distance_check(const FiniteMarginalSolution& fin, const LimitMarginalSolution& lim,
                                  const StationaryHierarchy& hier, const ConstantsLedger& ledger,
                                  const std::vector<MultiIndex>& indices, const std::vector<double>& times);

}  // namespace clmf

#endif
