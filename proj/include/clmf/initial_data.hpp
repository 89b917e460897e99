#ifndef CLMF_INITIAL_DATA_HPP
#define CLMF_INITIAL_DATA_HPP

#include "clmf/multi_index.hpp"
#include "clmf/spectral.hpp"

#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace clmf {

// Raised when a coefficient is requested outside the stored truncation.
class MissingIndex : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A probability measure on the circle given by its coefficients and, when
// available, a sampler.
struct Profile1D {
    std::string name;
    nlohmann::json params;
    std::function<cplx(long)> coef;
    std::function<double(std::mt19937_64&)> sample;  // may be empty

    static Profile1D uniform();
    static Profile1D point_mass(double theta0);
    // rho^{|n|} e^{-i n theta0}
    static Profile1D wrapped_cauchy(double rho, double theta0);
    // 2 / (2 + m n^2), the first stationary deviation law
    static Profile1D rational(double m = 1.0);
    static Profile1D from_json(const nlohmann::json& j);
};

enum class InitialKind { Chaotic, Ordered, Tensor };

// Initial law of the particle system, given through its marginals at every order.
class InitialData {
public:
    // f_{k,0}(n) = prod_r profile(n_r)
    static InitialData chaotic(Profile1D profile);
    // f_{k,0}(n) = profile(n_1 + ... + n_k): every particle at one common random angle
    static InitialData ordered(Profile1D profile);
    // tensors[r-1] holds the order-r marginal; indices outside a tensor are missing
    static InitialData from_tensors(std::vector<SpectralCoefficients> tensors);
    static InitialData from_json(const nlohmann::json& j);

    InitialKind kind() const { return kind_; }
    const Profile1D& profile() const { return profile_; }
    std::string describe() const;
    nlohmann::json to_json() const;

    // Throws MissingIndex for unresolvable tensor entries.
    cplx operator()(const MultiIndex& n) const;
    int max_order() const;  // -1 when unbounded
    bool can_sample() const;
    // Draws N angles in [-pi, pi).
    void sample(int N, std::mt19937_64& rng, std::vector<double>& out) const;

private:
    InitialKind kind_ = InitialKind::Chaotic;
    Profile1D profile_;
    std::vector<SpectralCoefficients> tensors_;
};

}  // namespace clmf

#endif
