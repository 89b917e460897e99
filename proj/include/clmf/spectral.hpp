#ifndef CLMF_SPECTRAL_HPP
#define CLMF_SPECTRAL_HPP

#include "clmf/multi_index.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace clmf {

using cplx = std::complex<double>;
using CoefficientFunction = std::function<cplx(const MultiIndex&)>;

inline int delta0(long n) { return n == 0 ? 1 : 0; }

// Fourier coefficients of a probability measure on T^k,
//   c(n) = int exp(-i n.theta) dmu(theta),
// stored densely over the cube [-n_max, n_max]^k.
class SpectralCoefficients {
public:
    SpectralCoefficients() = default;
    SpectralCoefficients(int dimension, int n_max, std::string label = {});

    static SpectralCoefficients from_function(int dimension, int n_max, const CoefficientFunction& f,
                                              std::string label = {});

    int dimension() const { return dimension_; }
    int n_max() const { return n_max_; }
    std::size_t size() const { return values_.size(); }

    bool contains(const MultiIndex& n) const;
    cplx operator()(const MultiIndex& n) const;  // throws std::out_of_range
    cplx value_or(const MultiIndex& n, cplx fallback) const;
    void set(const MultiIndex& n, cplx v);

    MultiIndex index_at(std::size_t flat) const;
    std::size_t flat_index(const MultiIndex& n) const;
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }

    std::string label;
    double time = 0.0;

private:
    int dimension_ = 0;
    int n_max_ = 0;
    std::vector<cplx> values_;
};

struct Verdict {
    bool pass = true;
    double worst = 0.0;  // largest violation measured
    std::vector<std::string> failures;

    void fail(const std::string& why, double amount);
};

SpectralCoefficients marginal(const SpectralCoefficients& c, int j);

Verdict check_probability(const SpectralCoefficients& c, double tol = 1e-10);
Verdict check_even(const SpectralCoefficients& c, double tol = 1e-10);
Verdict check_symmetric(const SpectralCoefficients& c, double tol = 1e-10);

struct DensityResult {
    std::vector<double> values;
    double max_imag = 0.0;
    // Largest |c(n)| over the outermost shell of the cube; a cheap truncation indicator.
    double boundary_magnitude = 0.0;
};

// Sum_n c(n) exp(i n.theta) at each grid point.
DensityResult density_eval(const SpectralCoefficients& c, const std::vector<std::vector<double>>& grid,
                           double tol = 1e-8);

struct PsdVerdict {
    bool pass = true;
    double min_eigenvalue = 0.0;
};

// Gram matrix G_{ab} = c(p_a - p_b) and its smallest eigenvalue.
PsdVerdict bochner_psd_check(const SpectralCoefficients& c, const std::vector<MultiIndex>& points,
                             double tol = 1e-10);
PsdVerdict bochner_psd_check(const CoefficientFunction& c, const std::vector<MultiIndex>& points,
                             double tol = 1e-10);

void to_json(nlohmann::json& j, const SpectralCoefficients& c);
void from_json(const nlohmann::json& j, SpectralCoefficients& c);

}  // namespace clmf

#endif
