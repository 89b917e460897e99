#include "clmf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace clmf {

SpectralCoefficients::SpectralCoefficients(int dimension, int n_max, std::string label_)
    : label(std::move(label_)), dimension_(dimension), n_max_(n_max)
{
    if (dimension < 1) throw std::invalid_argument("SpectralCoefficients: dimension must be >= 1");
    if (n_max < 0) throw std::invalid_argument("SpectralCoefficients: n_max must be >= 0");
    std::size_t total = 1;
    for (int r = 0; r < dimension; ++r) total *= static_cast<std::size_t>(2 * n_max + 1);
    values_.assign(total, cplx(0.0, 0.0));
}

SpectralCoefficients SpectralCoefficients::from_function(int dimension, int n_max, const CoefficientFunction& f,
                                                         std::string label_)
{
    SpectralCoefficients c(dimension, n_max, std::move(label_));
    for (std::size_t flat = 0; flat < c.values_.size(); ++flat) c.values_[flat] = f(c.index_at(flat));
    return c;
}

bool SpectralCoefficients::contains(const MultiIndex& n) const
{
    if (static_cast<int>(n.size()) != dimension_) return false;
    for (int v : n)
        if (v < -n_max_ || v > n_max_) return false;
    return true;
}

std::size_t SpectralCoefficients::flat_index(const MultiIndex& n) const
{
    std::size_t flat = 0;
    const std::size_t width = static_cast<std::size_t>(2 * n_max_ + 1);
    for (int v : n) flat = flat * width + static_cast<std::size_t>(v + n_max_);
    return flat;
}

MultiIndex SpectralCoefficients::index_at(std::size_t flat) const
{
    MultiIndex n(dimension_);
    const std::size_t width = static_cast<std::size_t>(2 * n_max_ + 1);
    for (int r = dimension_ - 1; r >= 0; --r) {
        n[r] = static_cast<int>(flat % width) - n_max_;
        flat /= width;
    }
    return n;
}

cplx SpectralCoefficients::operator()(const MultiIndex& n) const
{
    if (!contains(n))
        throw std::out_of_range("SpectralCoefficients: index " + to_string(n) + " outside truncation");
    return values_[flat_index(n)];
}

cplx SpectralCoefficients::value_or(const MultiIndex& n, cplx fallback) const
{
    return contains(n) ? values_[flat_index(n)] : fallback;
}

void SpectralCoefficients::set(const MultiIndex& n, cplx v)
{
    if (!contains(n))
        throw std::out_of_range("SpectralCoefficients: index " + to_string(n) + " outside truncation");
    values_[flat_index(n)] = v;
}

void Verdict::fail(const std::string& why, double amount)
{
    pass = false;
    worst = std::max(worst, amount);
    if (failures.size() < 20) failures.push_back(why);
}

SpectralCoefficients marginal(const SpectralCoefficients& c, int j)
{
    if (j < 1 || j > c.dimension())
        throw std::invalid_argument("marginal: j must lie in [1, k]");
    SpectralCoefficients out(j, c.n_max(), c.label);
    out.time = c.time;
    MultiIndex full(c.dimension(), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        MultiIndex n = out.index_at(flat);
        std::copy(n.begin(), n.end(), full.begin());
        out.values()[flat] = c(full);
    }
    return out;
}

Verdict check_probability(const SpectralCoefficients& c, double tol)
{
    Verdict v;
    const MultiIndex zero(c.dimension(), 0);
    const double dz = std::abs(c(zero) - cplx(1.0, 0.0));
    if (dz > tol) v.fail("normalization: c(0) = " + std::to_string(c(zero).real()), dz);
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        const MultiIndex n = c.index_at(flat);
        const cplx val = c.values()[flat];
        const double excess = std::abs(val) - 1.0;
        if (excess > tol) v.fail("modulus above 1 at " + to_string(n), excess);
        const double asym = std::abs(c(negate(n)) - std::conj(val));
        if (asym > tol) v.fail("conjugate symmetry broken at " + to_string(n), asym);
        v.worst = std::max(v.worst, std::max({excess, asym, 0.0}));
    }
    return v;
}

Verdict check_even(const SpectralCoefficients& c, double tol)
{
    Verdict v;
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        const MultiIndex n = c.index_at(flat);
        const double d = std::abs(c.values()[flat] - c(negate(n)));
        if (d > tol) v.fail("c(n) != c(-n) at " + to_string(n), d);
        v.worst = std::max(v.worst, d);
    }
    return v;
}

Verdict check_symmetric(const SpectralCoefficients& c, double tol)
{
    Verdict v;
    const int k = c.dimension();
    if (k == 1) return v;
    std::vector<std::vector<int>> perms;
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    if (k <= 6) {
        do perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
    } else {
        // adjacent transpositions generate the symmetric group
        for (int r = 0; r + 1 < k; ++r) {
            std::vector<int> q(k);
            std::iota(q.begin(), q.end(), 0);
            std::swap(q[r], q[r + 1]);
            perms.push_back(q);
        }
        std::vector<int> cyc(k);
        for (int r = 0; r < k; ++r) cyc[r] = (r + 1) % k;
        perms.push_back(cyc);
    }
    MultiIndex m(k);
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        const MultiIndex n = c.index_at(flat);
        const cplx val = c.values()[flat];
        for (const auto& perm : perms) {
            for (int r = 0; r < k; ++r) m[r] = n[perm[r]];
            const double d = std::abs(val - c(m));
            if (d > tol) v.fail("permutation changes value at " + to_string(n), d);
            v.worst = std::max(v.worst, d);
        }
    }
    return v;
}

DensityResult density_eval(const SpectralCoefficients& c, const std::vector<std::vector<double>>& grid, double tol)
{
    const int k = c.dimension();
    const int R = c.n_max();
    const int width = 2 * R + 1;
    DensityResult res;
    res.values.reserve(grid.size());

    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        const MultiIndex n = c.index_at(flat);
        bool outer = false;
        for (int v : n) outer = outer || std::abs(v) == R;
        if (outer) res.boundary_magnitude = std::max(res.boundary_magnitude, std::abs(c.values()[flat]));
    }

    std::vector<cplx> phase(static_cast<std::size_t>(k * width));
    for (const auto& theta : grid) {
        if (static_cast<int>(theta.size()) != k) throw std::invalid_argument("density_eval: grid point dimension mismatch");
        for (int r = 0; r < k; ++r)
            for (int n = -R; n <= R; ++n) phase[r * width + n + R] = std::polar(1.0, n * theta[r]);
        cplx sum = 0.0;
        MultiIndex idx(k, 0);
        for (std::size_t flat = 0; flat < c.size(); ++flat) {
            std::size_t rest = flat;
            cplx w = 1.0;
            for (int r = k - 1; r >= 0; --r) {
                const int pos = static_cast<int>(rest % width);
                rest /= width;
                w *= phase[r * width + pos];
            }
            sum += c.values()[flat] * w;
        }
        res.max_imag = std::max(res.max_imag, std::abs(sum.imag()));
        res.values.push_back(sum.real());
    }
    if (res.max_imag > tol * std::max(1.0, static_cast<double>(c.size())))
        throw std::runtime_error("density_eval: coefficients do not describe a real density (imaginary residue " +
                                 std::to_string(res.max_imag) + ")");
    return res;
}

static PsdVerdict smallest_eigenvalue(const Eigen::MatrixXcd& G, double tol)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(G, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("bochner_psd_check: eigen-solve failed");
    PsdVerdict v;
    v.min_eigenvalue = solver.eigenvalues().minCoeff();
    v.pass = v.min_eigenvalue >= -tol;
    return v;
}

PsdVerdict bochner_psd_check(const SpectralCoefficients& c, const std::vector<MultiIndex>& points, double tol)
{
    const auto m = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXcd G(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            MultiIndex d(points[a].size());
            for (std::size_t r = 0; r < d.size(); ++r) d[r] = points[a][r] - points[b][r];
            if (!c.contains(d))
                throw std::out_of_range("bochner_psd_check: difference " + to_string(d) + " not resolvable");
            G(a, b) = c(d);
        }
    return smallest_eigenvalue(G, tol);
}

PsdVerdict bochner_psd_check(const CoefficientFunction& c, const std::vector<MultiIndex>& points, double tol)
{
    const auto m = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXcd G(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            MultiIndex d(points[a].size());
            for (std::size_t r = 0; r < d.size(); ++r) d[r] = points[a][r] - points[b][r];
            G(a, b) = c(d);
        }
    return smallest_eigenvalue(G, tol);
}

void to_json(nlohmann::json& j, const SpectralCoefficients& c)
{
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        nlohmann::json row = nlohmann::json::array();
        for (int v : c.index_at(flat)) row.push_back(v);
        row.push_back(c.values()[flat].real());
        row.push_back(c.values()[flat].imag());
        values.push_back(std::move(row));
    }
    j = nlohmann::json{{"dimension", c.dimension()}, {"n_max", c.n_max()}, {"values", std::move(values)},
                       {"label", c.label}, {"time", c.time}};
}

void from_json(const nlohmann::json& j, SpectralCoefficients& c)
{
    const int k = j.at("dimension").get<int>();
    const int R = j.at("n_max").get<int>();
    SpectralCoefficients out(k, R, j.value("label", std::string{}));
    out.time = j.value("time", 0.0);
    for (const auto& row : j.at("values")) {
        if (static_cast<int>(row.size()) != k + 2)
            throw std::invalid_argument("spectral json: each value row needs k indices plus re, im");
        MultiIndex n(k);
        for (int r = 0; r < k; ++r) n[r] = row[r].get<int>();
        out.set(n, cplx(row[k].get<double>(), row[k + 1].get<double>()));
    }
    c = std::move(out);
}

}  // namespace clmf
