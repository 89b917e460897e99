#include "clmf/initial_data.hpp"
#include "clmf/interaction.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace clmf {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform_angle(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-kPi, kPi);
    return u(rng);
}

}  // namespace

Profile1D Profile1D::uniform()
{
    Profile1D p;
    p.name = "uniform";
    p.params = nlohmann::json::object();
    p.coef = [](long n) { return cplx(delta0(n), 0.0); };
    p.sample = uniform_angle;
    return p;
}

Profile1D Profile1D::point_mass(double theta0)
{
    Profile1D p;
    p.name = "point_mass";
    p.params = {{"theta0", theta0}};
    p.coef = [theta0](long n) { return std::polar(1.0, -double(n) * theta0); };
    const double th = wrap_angle(theta0);
    p.sample = [th](std::mt19937_64&) { return th; };
    return p;
}

Profile1D Profile1D::wrapped_cauchy(double rho, double theta0)
{
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("wrapped_cauchy: rho must lie in (0, 1)");
    Profile1D p;
    p.name = "wrapped_cauchy";
    p.params = {{"rho", rho}, {"theta0", theta0}};
    p.coef = [rho, theta0](long n) { return std::polar(std::pow(rho, std::abs(double(n))), -double(n) * theta0); };
    const double gamma = -std::log(rho);
    p.sample = [gamma, theta0](std::mt19937_64& rng) {
        std::cauchy_distribution<double> c(theta0, gamma);
        return wrap_angle(c(rng));
    };
    return p;
}

Profile1D Profile1D::rational(double m)
{
    if (!(m > 0.0)) throw std::invalid_argument("rational profile: m must be positive");
    Profile1D p;
    p.name = "rational";
    p.params = {{"m", m}};
    p.coef = [m](long n) { return cplx(2.0 / (2.0 + m * double(n) * double(n)), 0.0); };
    // wrapped Laplace law with scale sqrt(m/2)
    const double b = std::sqrt(m / 2.0);
    p.sample = [b](std::mt19937_64& rng) {
        std::exponential_distribution<double> e(1.0 / b);
        std::bernoulli_distribution s(0.5);
        const double x = e(rng);
        return wrap_angle(s(rng) ? x : -x);
    };
    return p;
}

Profile1D Profile1D::from_json(const nlohmann::json& j)
{
    const std::string name = j.at("name").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (name == "uniform") return uniform();
    if (name == "point_mass") return point_mass(params.value("theta0", 0.0));
    if (name == "wrapped_cauchy") return wrapped_cauchy(params.at("rho").get<double>(), params.value("theta0", 0.0));
    if (name == "rational") return rational(params.value("m", 1.0));
    throw std::invalid_argument("unknown profile '" + name + "'");
}

InitialData InitialData::chaotic(Profile1D profile)
{
    InitialData d;
    d.kind_ = InitialKind::Chaotic;
    d.profile_ = std::move(profile);
    return d;
}

InitialData InitialData::ordered(Profile1D profile)
{
    InitialData d;
    d.kind_ = InitialKind::Ordered;
    d.profile_ = std::move(profile);
    return d;
}

InitialData InitialData::from_tensors(std::vector<SpectralCoefficients> tensors)
{
    if (tensors.empty()) throw std::invalid_argument("initial data: no tensors supplied");
    for (std::size_t r = 0; r < tensors.size(); ++r)
        if (tensors[r].dimension() != int(r) + 1)
            throw std::invalid_argument("initial data: tensor " + std::to_string(r + 1) + " has wrong dimension");
    InitialData d;
    d.kind_ = InitialKind::Tensor;
    d.profile_.name = "tensor";
    d.tensors_ = std::move(tensors);
    return d;
}

InitialData InitialData::from_json(const nlohmann::json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "chaotic") return chaotic(Profile1D::from_json(j.at("profile")));
    if (kind == "ordered") return ordered(Profile1D::from_json(j.at("profile")));
    if (kind == "tensor") {
        std::vector<SpectralCoefficients> ts;
        for (const auto& t : j.at("tensors")) ts.push_back(t.get<SpectralCoefficients>());
        return from_tensors(std::move(ts));
    }
    throw std::invalid_argument("unknown initial data kind '" + kind + "'");
}

std::string InitialData::describe() const
{
    switch (kind_) {
    case InitialKind::Chaotic: return "chaotic(" + profile_.name + ")";
    case InitialKind::Ordered: return "ordered(" + profile_.name + ")";
    case InitialKind::Tensor: return "tensor(" + std::to_string(tensors_.size()) + " orders)";
    }
    return "unknown";
}

nlohmann::json InitialData::to_json() const
{
    switch (kind_) {
    case InitialKind::Chaotic:
        return {{"kind", "chaotic"}, {"profile", {{"name", profile_.name}, {"params", profile_.params}}}};
    case InitialKind::Ordered:
        return {{"kind", "ordered"}, {"profile", {{"name", profile_.name}, {"params", profile_.params}}}};
    case InitialKind::Tensor: {
        nlohmann::json ts = nlohmann::json::array();
        for (const auto& t : tensors_) ts.push_back(t);
        return {{"kind", "tensor"}, {"tensors", ts}};
    }
    }
    return {};
}

cplx InitialData::operator()(const MultiIndex& n) const
{
    switch (kind_) {
    case InitialKind::Chaotic: {
        cplx v = 1.0;
        for (int x : n) {
            if (x == 0) continue;
            v *= profile_.coef(x);
        }
        return v;
    }
    case InitialKind::Ordered: return profile_.coef(index_sum(n));
    case InitialKind::Tensor: {
        const std::size_t k = n.size();
        if (k == 0 || k > tensors_.size())
            throw MissingIndex("initial data: order " + std::to_string(k) + " not supplied");
        const auto& t = tensors_[k - 1];
        if (!t.contains(n)) throw MissingIndex("initial data: index " + to_string(n) + " outside truncation");
        return t(n);
    }
    }
    return 0.0;
}

int InitialData::max_order() const
{
    return kind_ == InitialKind::Tensor ? int(tensors_.size()) : -1;
}

bool InitialData::can_sample() const
{
    return kind_ != InitialKind::Tensor && bool(profile_.sample);
}

void InitialData::sample(int N, std::mt19937_64& rng, std::vector<double>& out) const
{
    if (!can_sample()) throw std::invalid_argument("initial data " + describe() + " has no sampler");
    out.resize(N);
    if (kind_ == InitialKind::Ordered) {
        const double common = profile_.sample(rng);
        for (auto& x : out) x = common;
        return;
    }
    for (auto& x : out) x = profile_.sample(rng);
}

}  // namespace clmf
