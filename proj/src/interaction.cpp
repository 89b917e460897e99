#include "clmf/interaction.hpp"
#include "clmf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace clmf {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x)
{
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace

std::string to_string(GFamily f)
{
    switch (f) {
    case GFamily::Uniform: return "uniform";
    case GFamily::Gaussian: return "gaussian";
    case GFamily::Laplace: return "laplace";
    case GFamily::Custom: return "custom";
    }
    return "unknown";
}

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::Critical: return "critical";
    case Regime::Order: return "order";
    case Regime::Chaos: return "chaos";
    }
    return "unknown";
}

InteractionGenerator InteractionGenerator::uniform(double width, double p)
{
    if (!(width > 0.0)) throw std::invalid_argument("uniform generator: width must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("generator: p must exceed 1");
    InteractionGenerator g;
    g.family_ = GFamily::Uniform;
    g.param_ = width;
    g.p_ = p;
    return g;
}

InteractionGenerator InteractionGenerator::gaussian(double sigma, double p)
{
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian generator: sigma must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("generator: p must exceed 1");
    InteractionGenerator g;
    g.family_ = GFamily::Gaussian;
    g.param_ = sigma;
    g.p_ = p;
    return g;
}

InteractionGenerator InteractionGenerator::laplace(double scale, double p)
{
    if (!(scale > 0.0)) throw std::invalid_argument("laplace generator: scale must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("generator: p must exceed 1");
    InteractionGenerator g;
    g.family_ = GFamily::Laplace;
    g.param_ = scale;
    g.p_ = p;
    return g;
}

InteractionGenerator InteractionGenerator::tabulated(std::vector<double> x, std::vector<double> gv, double p)
{
    if (x.size() != gv.size() || x.size() < 2)
        throw std::invalid_argument("tabulated generator: need at least two (x, g) rows of equal length");
    if (!(p > 1.0)) throw std::invalid_argument("generator: p must exceed 1");
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (gv[i] < 0.0) throw std::invalid_argument("tabulated generator: negative density value");
        if (x[i] >= 0.0) rows.emplace_back(x[i], gv[i]);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [](const auto& a, const auto& b) { return a.first == b.first; }),
               rows.end());
    if (rows.size() < 2) throw std::invalid_argument("tabulated generator: need two distinct abscissae >= 0");
    if (rows.front().first > 0.0) rows.insert(rows.begin(), {0.0, rows.front().second});

    InteractionGenerator g;
    g.family_ = GFamily::Custom;
    g.p_ = p;
    for (auto& [xi, gi] : rows) {
        g.xs_.push_back(xi);
        g.gs_.push_back(gi);
    }
    double half = 0.0;
    for (std::size_t i = 0; i + 1 < g.xs_.size(); ++i)
        half += 0.5 * (g.gs_[i] + g.gs_[i + 1]) * (g.xs_[i + 1] - g.xs_[i]);
    if (!(half > 0.0)) throw std::invalid_argument("tabulated generator: density has zero mass");
    for (double& v : g.gs_) v /= 2.0 * half;
    g.param_ = g.xs_.back();
    std::vector<double> xs, ws;
    for (std::size_t i = g.xs_.size(); i-- > 1;) {
        xs.push_back(-g.xs_[i]);
        ws.push_back(g.gs_[i]);
    }
    for (std::size_t i = 0; i < g.xs_.size(); ++i) {
        xs.push_back(g.xs_[i]);
        ws.push_back(g.gs_[i]);
    }
    g.table_law_ = std::piecewise_linear_distribution<double>::param_type(xs.begin(), xs.end(), ws.begin());
    return g;
}

InteractionGenerator InteractionGenerator::from_csv(const std::string& path, double p)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open density table " + path);
    std::vector<double> x, gv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a >> b)) continue;  // header or malformed row
        x.push_back(a);
        gv.push_back(b);
    }
    return tabulated(std::move(x), std::move(gv), p);
}

InteractionGenerator InteractionGenerator::from_json(const nlohmann::json& j)
{
    const std::string fam = j.value("family", std::string("uniform"));
    const double p = j.value("p", 2.0);
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (fam == "uniform") return uniform(params.value("width", 1.0), p);
    if (fam == "gaussian") return gaussian(params.value("sigma", 1.0), p);
    if (fam == "laplace") return laplace(params.value("scale", 1.0), p);
    if (fam == "custom") {
        if (params.contains("csv")) return from_csv(params.at("csv").get<std::string>(), p);
        std::vector<double> x, gv;
        for (const auto& row : params.at("table")) {
            x.push_back(row.at(0).get<double>());
            gv.push_back(row.at(1).get<double>());
        }
        return tabulated(std::move(x), std::move(gv), p);
    }
    throw std::invalid_argument("unknown generator family '" + fam + "'");
}

nlohmann::json InteractionGenerator::to_json() const
{
    nlohmann::json j{{"family", to_string(family_)}, {"p", p_}};
    switch (family_) {
    case GFamily::Uniform: j["params"] = {{"width", param_}}; break;
    case GFamily::Gaussian: j["params"] = {{"sigma", param_}}; break;
    case GFamily::Laplace: j["params"] = {{"scale", param_}}; break;
    case GFamily::Custom: {
        nlohmann::json table = nlohmann::json::array();
        for (std::size_t i = 0; i < xs_.size(); ++i) table.push_back({xs_[i], gs_[i]});
        j["params"] = {{"table", table}};
        break;
    }
    }
    return j;
}

std::string InteractionGenerator::describe() const
{
    std::ostringstream os;
    os << to_string(family_) << '(' << param_ << ", p=" << p_ << ')';
    return os.str();
}

double InteractionGenerator::density(double x) const
{
    const double ax = std::abs(x);
    switch (family_) {
    case GFamily::Uniform: return ax <= 0.5 * param_ ? 1.0 / param_ : 0.0;
    case GFamily::Gaussian: return std::exp(-0.5 * x * x / (param_ * param_)) / (std::sqrt(2.0 * kPi) * param_);
    case GFamily::Laplace: return std::exp(-ax / param_) / (2.0 * param_);
    case GFamily::Custom: {
        if (ax >= xs_.back()) return 0.0;
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), ax);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        const double w = (ax - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return (1.0 - w) * gs_[i] + w * gs_[i + 1];
    }
    }
    return 0.0;
}

double InteractionGenerator::moment(int l) const
{
    if (l < 0) throw std::invalid_argument("moment: order must be nonnegative");
    switch (family_) {
    case GFamily::Uniform: return std::pow(0.5 * param_, l) / (l + 1.0);
    case GFamily::Gaussian:
        return std::pow(param_, l) * std::pow(2.0, 0.5 * l) * std::tgamma(0.5 * (l + 1.0)) / std::sqrt(kPi);
    case GFamily::Laplace: return std::tgamma(l + 1.0) * std::pow(param_, l);
    case GFamily::Custom: {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
            const double a = xs_[i], b = xs_[i + 1];
            const double slope = (gs_[i + 1] - gs_[i]) / (b - a);
            const double icpt = gs_[i] - slope * a;
            m += icpt * (std::pow(b, l + 1) - std::pow(a, l + 1)) / (l + 1.0) +
                 slope * (std::pow(b, l + 2) - std::pow(a, l + 2)) / (l + 2.0);
        }
        return 2.0 * m;
    }
    }
    return 0.0;
}

double InteractionGenerator::lp_norm() const
{
    const double p = p_;
    switch (family_) {
    case GFamily::Uniform: return std::pow(param_, 1.0 / p - 1.0);
    case GFamily::Gaussian:
        return std::pow(2.0 * kPi * param_ * param_, (1.0 - p) / (2.0 * p)) * std::pow(p, -0.5 / p);
    case GFamily::Laplace: return std::pow(2.0 * param_, (1.0 - p) / p) * std::pow(p, -1.0 / p);
    case GFamily::Custom: {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
            s += 0.5 * (std::pow(gs_[i], p) + std::pow(gs_[i + 1], p)) * (xs_[i + 1] - xs_[i]);
        return std::pow(2.0 * s, 1.0 / p);
    }
    }
    return 0.0;
}

double InteractionGenerator::mass_within(double a) const
{
    if (a <= 0.0) return 0.0;
    switch (family_) {
    case GFamily::Uniform: return std::min(1.0, 2.0 * a / param_);
    case GFamily::Gaussian: return std::erf(a / (std::sqrt(2.0) * param_));
    case GFamily::Laplace: return 1.0 - std::exp(-a / param_);
    case GFamily::Custom: {
        double half = 0.0;
        for (std::size_t i = 0; i + 1 < xs_.size() && xs_[i] < a; ++i) {
            const double hi = std::min(a, xs_[i + 1]);
            half += 0.5 * (gs_[i] + density(hi)) * (hi - xs_[i]);
        }
        return 2.0 * half;
    }
    }
    return 0.0;
}

double InteractionGenerator::cosine_integral(double a, double xi) const
{
    // effective support: beyond it the density is below 1e-26
    double reach = a;
    if (family_ == GFamily::Gaussian) reach = std::min(a, 12.0 * param_);
    if (family_ == GFamily::Laplace) reach = std::min(a, 60.0 * param_);
    if (family_ == GFamily::Uniform) reach = std::min(a, 0.5 * param_);
    auto f = [&](double x) { return density(x) * std::cos(xi * x); };
    if (family_ == GFamily::Custom) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < xs_.size() && xs_[i] < a; ++i) {
            const double hi = std::min(a, xs_[i + 1]);
            const int pieces = 1 + static_cast<int>(std::abs(xi) * (hi - xs_[i]) / kPi);
            s += integrate(f, xs_[i], hi, 1e-13, pieces);
        }
        return 2.0 * s;
    }
    const int pieces = 1 + static_cast<int>(std::min(4096.0, std::abs(xi) * reach / kPi));
    return 2.0 * integrate(f, 0.0, reach, 1e-13, pieces);
}

double InteractionGenerator::fourier(double xi) const
{
    switch (family_) {
    case GFamily::Uniform: return sinc(0.5 * param_ * xi);
    case GFamily::Gaussian: return std::exp(-0.5 * param_ * param_ * xi * xi);
    case GFamily::Laplace: return 1.0 / (1.0 + param_ * param_ * xi * xi);
    case GFamily::Custom: return cosine_integral(xs_.back(), xi);
    }
    return 0.0;
}

double InteractionGenerator::sample(std::mt19937_64& rng) const
{
    switch (family_) {
    case GFamily::Uniform: {
        std::uniform_real_distribution<double> u(-0.5 * param_, 0.5 * param_);
        return u(rng);
    }
    case GFamily::Gaussian: {
        std::normal_distribution<double> nd(0.0, param_);
        return nd(rng);
    }
    case GFamily::Laplace: {
        std::exponential_distribution<double> ex(1.0 / param_);
        std::bernoulli_distribution sign(0.5);
        const double v = ex(rng);
        return sign(rng) ? v : -v;
    }
    case GFamily::Custom: {
        std::piecewise_linear_distribution<double> d;
        return d(rng, table_law_);
    }
    }
    return 0.0;
}

ScalingSchedule ScalingSchedule::critical(int N, double lambda, double alpha)
{
    if (N < 2) throw std::invalid_argument("schedule: N must be at least 2");
    ScalingSchedule s;
    s.N = N;
    s.epsilon = 1.0 / std::sqrt(static_cast<double>(N));
    s.regime = Regime::Critical;
    s.lambda = lambda;
    s.alpha = alpha > 0.0 ? alpha : std::pow(static_cast<double>(N), -0.25);
    return s;
}

ScalingSchedule ScalingSchedule::with_epsilon(int N, double epsilon, Regime regime, double lambda, double alpha,
                                              std::string* warning)
{
    if (N < 2) throw std::invalid_argument("schedule: N must be at least 2");
    if (!(epsilon > 0.0)) throw std::invalid_argument("schedule: epsilon must be positive");
    if (regime == Regime::Critical) {
        if (warning) *warning = "critical regime forces epsilon = 1/sqrt(N); supplied epsilon ignored";
        return critical(N, lambda, alpha);
    }
    ScalingSchedule s;
    s.N = N;
    s.epsilon = epsilon;
    s.regime = regime;
    s.lambda = lambda;
    s.alpha = alpha > 0.0 ? alpha : std::pow(static_cast<double>(N), -0.25);
    const double ne2 = N * epsilon * epsilon;
    if (warning) {
        if (regime == Regime::Order && ne2 >= 1.0)
            *warning = "order regime expects N eps^2 << 1, got " + std::to_string(ne2);
        if (regime == Regime::Chaos && ne2 <= 1.0)
            *warning = "chaos regime expects N eps^2 >> 1, got " + std::to_string(ne2);
    }
    return s;
}

double g_hat(const InteractionGenerator& gen, double eps, long n)
{
    if (!(eps > 0.0)) throw std::invalid_argument("g_hat: eps must be positive");
    if (n == 0) return 1.0;
    const double a = kPi / eps;
    double v;
    if (gen.family() == GFamily::Uniform) {
        const double reach = std::min(a, 0.5 * gen.parameter());
        v = sinc(static_cast<double>(n) * eps * reach);
    } else {
        v = gen.cosine_integral(a, static_cast<double>(n) * eps) / gen.mass_within(a);
    }
    if (v > 1.0 + 1e-10 || v < -1.0 - 1e-10)
        throw std::runtime_error("g_hat: coefficient outside [-1, 1]");
    return std::clamp(v, -1.0, 1.0);
}

double tau_N(const InteractionGenerator& gen, double eps, int l)
{
    const double el = std::pow(eps, l) * gen.moment(l);
    const double pl = std::pow(kPi, l);
    if (el >= pl) throw std::domain_error("tau_N: need eps^l m_l < pi^l (scale too coarse)");
    return 2.0 * el / (pl - el);
}

double fourier_transform_g(const InteractionGenerator& gen, double xi)
{
    return gen.fourier(xi);
}

LowFreqReport low_freq_residual(const InteractionGenerator& gen, const ScalingSchedule& sched, long n, int l)
{
    const double eps = sched.epsilon;
    if (!(eps < kPi / std::pow(gen.moment(l), 1.0 / l)))
        throw std::domain_error("low_freq_residual: need eps < pi / m_l^{1/l}");
    LowFreqReport r;
    const double en = eps * static_cast<double>(n);
    r.residual = std::abs(g_hat(gen, eps, n) - 1.0 + 0.5 * gen.m2() * en * en);
    const double tail = (l == 3) ? gen.moment(3) / 3.0 * std::pow(std::abs(en), 3)
                                 : gen.moment(4) / 12.0 * std::pow(en, 4);
    r.bound = tau_N(gen, eps, l) + tail;
    r.pass = r.residual <= r.bound;
    return r;
}

HighFreqReport high_freq_gap(const InteractionGenerator& gen, const ScalingSchedule& sched, int l, long n_last)
{
    const double eps = sched.epsilon;
    const double alpha = sched.alpha;
    const double q = gen.q();
    const double norm = gen.lp_norm();
    const double ml = gen.moment(l);
    if (!(eps < kPi / std::pow(ml, 1.0 / l)))
        throw std::domain_error("high_freq_gap: need eps < pi / m_l^{1/l}");
    if (!(alpha <= std::pow(4.0, q + 1.0) * std::pow(norm, q)))
        throw std::domain_error("high_freq_gap: need alpha_N <= 4^{q+1} ||g||_p^q");

    HighFreqReport r;
    r.tau = tau_N(gen, eps, l);
    const double root = std::pow(4.0 * ml, 1.0 / l);
    const double denom = 2.0 * std::pow(4.0, 2.0 * (q + 1.0) + 1.0) * std::pow(norm, 2.0 * q) *
                         std::pow(root * alpha + 2.0 * kPi, 2);
    r.gap = r.tau - alpha * alpha * kPi * kPi / denom;
    r.n_first = static_cast<long>(std::ceil(alpha / eps - 1e-12));
    if (r.n_first < 1) r.n_first = 1;
    r.n_last = std::max(n_last, r.n_first);
    r.worst = -std::numeric_limits<double>::infinity();
    for (long n = r.n_first; n <= r.n_last; ++n) {
        const double excess = (g_hat(gen, eps, n) - 1.0) - r.gap;
        r.worst = std::max(r.worst, excess);
    }
    r.pass = r.worst <= 0.0;
    return r;
}

double wrap_angle(double theta)
{
    double w = theta - 2.0 * kPi * std::floor((theta + kPi) / (2.0 * kPi));
    if (w >= kPi) w -= 2.0 * kPi;
    if (w < -kPi) w += 2.0 * kPi;
    return w;
}

double sample_noise(const InteractionGenerator& gen, double eps, std::mt19937_64& rng, int max_tries)
{
    if (!(eps > 0.0)) throw std::invalid_argument("sample_noise: eps must be positive");
    const double a = kPi / eps;
    for (int tries = 0; tries < max_tries; ++tries) {
        const double z = gen.sample(rng);
        if (std::abs(z) <= a) return wrap_angle(eps * z);
    }
    throw std::runtime_error("sample_noise: rejection budget exceeded");
}

}  // namespace clmf
