#include "clmf/exp_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clmf {

bool rates_collide(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

ExpPolynomial ExpPolynomial::constant(cplx c, int tag)
{
    return exponential(c, 0.0, 0, tag);
}

ExpPolynomial ExpPolynomial::exponential(cplx c, double rate, int power, int tag)
{
    ExpPolynomial q;
    q.add(ExpTerm{c, rate, power, tag});
    return q;
}

void ExpPolynomial::add(const ExpTerm& term, double tol)
{
    if (term.power < 0) throw std::invalid_argument("ExpPolynomial: negative power");
    if (term.coef == cplx(0.0, 0.0)) return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->tag == term.tag && it->power == term.power && rates_collide(it->rate, term.rate, tol)) {
            it->coef += term.coef;
            if (it->coef == cplx(0.0, 0.0)) terms_.erase(it);
            return;
        }
    }
    terms_.push_back(term);
}

void ExpPolynomial::add(const ExpPolynomial& other, double tol)
{
    for (const auto& term : other.terms_) add(term, tol);
}

ExpPolynomial& ExpPolynomial::operator+=(const ExpPolynomial& other)
{
    add(other);
    return *this;
}

ExpPolynomial& ExpPolynomial::operator*=(cplx s)
{
    if (s == cplx(0.0, 0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& term : terms_) term.coef *= s;
    return *this;
}

cplx ExpPolynomial::operator()(double t) const
{
    cplx sum = 0.0;
    for (const auto& term : terms_) {
        double w = std::exp(-term.rate * t);
        if (term.power > 0) w *= std::pow(t, term.power);
        sum += term.coef * w;
    }
    return sum;
}

cplx ExpPolynomial::at_zero() const
{
    cplx sum = 0.0;
    for (const auto& term : terms_)
        if (term.power == 0) sum += term.coef;
    return sum;
}

cplx ExpPolynomial::evaluate_tag(double t, int tag) const
{
    cplx sum = 0.0;
    for (const auto& term : terms_) {
        if (term.tag != tag) continue;
        double w = std::exp(-term.rate * t);
        if (term.power > 0) w *= std::pow(t, term.power);
        sum += term.coef * w;
    }
    return sum;
}

ExpPolynomial ExpPolynomial::with_tag(int tag) const
{
    ExpPolynomial q;
    for (const auto& term : terms_)
        if (term.tag == tag) q.terms_.push_back(term);
    return q;
}

ExpPolynomial operator*(cplx s, ExpPolynomial q)
{
    q *= s;
    return q;
}

ExpPolynomial operator+(ExpPolynomial a, const ExpPolynomial& b)
{
    a += b;
    return a;
}

ExpPolynomial exppoly_convolve(double alpha, const ExpPolynomial& q, double tol, int alpha_tag)
{
    if (alpha < 0.0) throw std::invalid_argument("exppoly_convolve: alpha must be nonnegative");
    ExpPolynomial out;
    for (const auto& term : q.terms()) {
        const int p = term.power;
        const int tail_tag = (alpha_tag >= 0 && term.tag == 0) ? alpha_tag : term.tag;
        if (rates_collide(alpha, term.rate, tol)) {
            // e^{-alpha t} int_0^t s^p ds
            out.add(ExpTerm{term.coef / double(p + 1), alpha, p + 1, tail_tag}, tol);
            continue;
        }
        // int_0^t s^p e^{-d s} ds = p!/d^{p+1} (1 - e^{-dt} sum_j (dt)^j/j!),  d = beta - alpha
        const double d = term.rate - alpha;
        double pfact = 1.0;
        for (int j = 2; j <= p; ++j) pfact *= j;
        out.add(ExpTerm{term.coef * (pfact / std::pow(d, p + 1)), alpha, 0, tail_tag}, tol);
        double jfact = 1.0;
        for (int j = 0; j <= p; ++j) {
            if (j > 0) jfact *= j;
            const double c = pfact / (jfact * std::pow(d, p + 1 - j));
            out.add(ExpTerm{-term.coef * c, term.rate, j, term.tag}, tol);
        }
    }
    return out;
}

}  // namespace clmf
