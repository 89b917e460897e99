#include "clmf/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace clmf {

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, int pieces)
{
    using boost::math::quadrature::gauss_kronrod;
    if (pieces < 1) pieces = 1;
    const double h = (b - a) / pieces;
    double total = 0.0;
    double total_err = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == pieces) ? b : lo + h;
        double err = 0.0;
        double l1 = 0.0;
        total += gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-14, &err, &l1);
        total_err += err;
    }
    if (!std::isfinite(total) || total_err > abs_tol)
        throw std::runtime_error("integrate: quadrature did not converge (error estimate " +
                                 std::to_string(total_err) + ")");
    return total;
}

}  // namespace clmf
