#ifndef CLMF_INTERACTION_HPP
#define CLMF_INTERACTION_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace clmf {

enum class GFamily { Uniform, Gaussian, Laplace, Custom };

std::string to_string(GFamily f);

// Even probability density g on the real line: the interaction generating function.
class InteractionGenerator {
public:
    static InteractionGenerator uniform(double width = 1.0, double p = 2.0);
    static InteractionGenerator gaussian(double sigma = 1.0, double p = 2.0);
    static InteractionGenerator laplace(double scale = 1.0, double p = 2.0);
    // Table of (x, g(x)) for x >= 0 (negative abscissae are folded onto |x|).
    // The density is linearly interpolated, renormalized and zero beyond the table.
    static InteractionGenerator tabulated(std::vector<double> x, std::vector<double> g, double p = 2.0);
    static InteractionGenerator from_csv(const std::string& path, double p = 2.0);
    static InteractionGenerator from_json(const nlohmann::json& j);

    GFamily family() const { return family_; }
    double parameter() const { return param_; }
    std::string describe() const;

    double density(double x) const;
    // m_l = int |x|^l g(x) dx
    double moment(int l) const;
    double m2() const { return moment(2); }
    double p() const { return p_; }
    double q() const { return p_ / (p_ - 1.0); }
    double lp_norm() const;
    // int_{-a}^{a} g
    double mass_within(double a) const;
    // Fg(xi) = int g(x) cos(xi x) dx
    double fourier(double xi) const;
    // Z ~ g
    double sample(std::mt19937_64& rng) const;
    // int_{-a}^{a} g(x) cos(xi x) dx by quadrature
    double cosine_integral(double a, double xi) const;

    nlohmann::json to_json() const;

private:
    InteractionGenerator() = default;

    GFamily family_ = GFamily::Uniform;
    double param_ = 1.0;
    double p_ = 2.0;
    std::vector<double> xs_, gs_;  // tabulated half-line
    std::piecewise_linear_distribution<double>::param_type table_law_;
};

enum class Regime { Critical, Order, Chaos };

std::string to_string(Regime r);

struct ScalingSchedule {
    int N = 2;
    double epsilon = 1.0;
    Regime regime = Regime::Critical;
    double alpha = 1.0;   // frequency split alpha_N
    double lambda = 1.0;  // interaction rate

    // epsilon = 1/sqrt(N) exactly; alpha defaults to N^{-1/4}
    static ScalingSchedule critical(int N, double lambda = 1.0, double alpha = 0.0);
    // Any epsilon; `warning` receives a message when epsilon is inconsistent with the regime.
    static ScalingSchedule with_epsilon(int N, double epsilon, Regime regime, double lambda, double alpha,
                                        std::string* warning = nullptr);
};

// hat g_eps(n) = (2 pi G_eps)^{-1} int_{-pi/eps}^{pi/eps} g(x) cos(n eps x) dx
double g_hat(const InteractionGenerator& gen, double eps, long n);

// 2 eps^l m_l / (pi^l - eps^l m_l); throws std::domain_error if eps^l m_l >= pi^l
double tau_N(const InteractionGenerator& gen, double eps, int l);

double fourier_transform_g(const InteractionGenerator& gen, double xi);

struct LowFreqReport {
    double residual = 0.0;  // |g_hat - 1 + m2 eps^2 n^2 / 2|
    double bound = 0.0;
    bool pass = true;
};

LowFreqReport low_freq_residual(const InteractionGenerator& gen, const ScalingSchedule& sched, long n, int l);

struct HighFreqReport {
    double gap = 0.0;     // tau_N - alpha^2 pi^2 / (2 4^{2(q+1)+1} ||g||^{2q} (root_l(4 m_l) alpha + 2 pi)^2)
    double tau = 0.0;
    long n_first = 0;     // first swept |n| >= alpha/eps
    long n_last = 0;
    double worst = 0.0;   // max over the sweep of (g_hat(n) - 1) - gap
    bool pass = true;
};

// Sweeps n in [ceil(alpha/eps), n_last]; throws std::domain_error on unmet hypotheses.
HighFreqReport high_freq_gap(const InteractionGenerator& gen, const ScalingSchedule& sched, int l, long n_last);

// eps * Z with Z ~ g conditioned on [-pi/eps, pi/eps], wrapped to [-pi, pi).
double sample_noise(const InteractionGenerator& gen, double eps, std::mt19937_64& rng, int max_tries = 1000000);

double wrap_angle(double theta);

}  // namespace clmf

#endif
