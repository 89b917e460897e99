#ifndef CLMF_EXP_POLYNOMIAL_HPP
#define CLMF_EXP_POLYNOMIAL_HPP

#include <complex>
#include <vector>

namespace clmf {

using cplx = std::complex<double>;

// coef * t^power * exp(-rate * t).  The tag is a bookkeeping label carried
// through convolutions; terms with different tags are never merged.
struct ExpTerm {
    cplx coef;
    double rate = 0.0;
    int power = 0;
    int tag = 0;
};

inline constexpr double kRateTolerance = 1e-12;

bool rates_collide(double a, double b, double tol = kRateTolerance);

class ExpPolynomial {
public:
    ExpPolynomial() = default;

    static ExpPolynomial constant(cplx c, int tag = 0);
    static ExpPolynomial exponential(cplx c, double rate, int power = 0, int tag = 0);

    void add(const ExpTerm& term, double tol = kRateTolerance);
    void add(const ExpPolynomial& other, double tol = kRateTolerance);

    ExpPolynomial& operator+=(const ExpPolynomial& other);
    ExpPolynomial& operator*=(cplx s);

    cplx operator()(double t) const;
    cplx at_zero() const;

    // Sum of the terms carrying the given tag, evaluated at t.
    cplx evaluate_tag(double t, int tag) const;
    ExpPolynomial with_tag(int tag) const;

    const std::vector<ExpTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

private:
    std::vector<ExpTerm> terms_;
};

ExpPolynomial operator*(cplx s, ExpPolynomial q);
ExpPolynomial operator+(ExpPolynomial a, const ExpPolynomial& b);

// Closed form of t -> int_0^t exp(-alpha (t-s)) q(s) ds.
//
// Output terms inherit the tag of the input term, except that when
// alpha_tag >= 0 the pieces of a tag-0 input that decay at rate alpha
// (including the resonant t^{p+1}/(p+1) branch) are relabelled alpha_tag.
ExpPolynomial exppoly_convolve(double alpha, const ExpPolynomial& q,
                               double tol = kRateTolerance, int alpha_tag = -1);

}  // namespace clmf

#endif
