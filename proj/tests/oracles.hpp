#ifndef CLMF_TEST_ORACLES_HPP
#define CLMF_TEST_ORACLES_HPP

#include "clmf/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

using cplx = std::complex<double>;
using clmf::MultiIndex;

inline cplx gk(const std::function<cplx(double)>& f, double a, double b)
{
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-12);
}

inline MultiIndex merge(const MultiIndex& n, int i, int j)
{
    MultiIndex m;
    for (int r = 0; r < int(n.size()); ++r) {
        if (r == j) continue;
        m.push_back(r == i ? n[i] + n[j] : n[r]);
    }
    return m;
}

// Solves  F_k(n,t) = e^{-rate t} F_k(n,0) + sum_{i<j} weight(n,i,j) int_0^t e^{-rate (t-s)} F_{k-1}(merge, s) ds
// by nested adaptive quadrature.
struct Recursion {
    std::function<double(const MultiIndex&)> rate;
    std::function<double(const MultiIndex&, int, int)> weight;
    std::function<cplx(const MultiIndex&)> initial;

    cplx operator()(const MultiIndex& n, double t) const
    {
        const double a = rate(n);
        cplx v = std::exp(-a * t) * initial(n);
        if (n.size() < 2) return v;
        for (int i = 0; i < int(n.size()); ++i)
            for (int j = i + 1; j < int(n.size()); ++j) {
                const double w = weight(n, i, j);
                if (w == 0.0) continue;
                const MultiIndex m = merge(n, i, j);
                v += w * gk([&](double s) { return std::exp(-a * (t - s)) * (*this)(m, s); }, 0.0, t);
            }
        return v;
    }
};

// H(0) for m_2 = 1 from the hyperbolic cotangent series.
inline double h_at_zero_m2_one()
{
    const double r = std::sqrt(2.0);
    return std::numbers::pi * r / std::tanh(r * std::numbers::pi);
}

// sum_n e^{i n theta} / (n^2 + c^2) = (pi/c) cosh(c (pi - |theta|)) / sinh(c pi)
inline double lorentz_series(double c, double theta)
{
    const double pi = std::numbers::pi;
    return pi / c * std::cosh(c * (pi - std::abs(theta))) / std::sinh(c * pi);
}

// One-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf)
{
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

// 1% critical value of the KS statistic for large samples.
inline double ks_critical_1pct(std::size_t n)
{
    return 1.628 / std::sqrt(double(n));
}

}  // namespace oracle

#endif
