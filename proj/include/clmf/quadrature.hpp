#ifndef CLMF_QUADRATURE_HPP
#define CLMF_QUADRATURE_HPP

#include <functional>

namespace clmf {

// Adaptive Gauss-Kronrod on [a, b], split into `pieces` equal panels.
// Throws std::runtime_error when the error estimate exceeds abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                 int pieces = 1);

}  // namespace clmf

#endif
