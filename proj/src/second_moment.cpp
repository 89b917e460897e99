#include "clmf/second_moment.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace clmf {

std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(double x, std::int64_t max_den)
{
    if (!std::isfinite(x) || x <= 0.0) return std::nullopt;
    // convergents h/k of the continued fraction of x
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        const double a_d = std::floor(r);
        if (a_d > 1e12) break;
        const auto a = static_cast<std::int64_t>(a_d);
        const std::int64_t h2 = a * h1 + h0;
        const std::int64_t k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2;
        k0 = k1; k1 = k2;
        const double approx = static_cast<double>(h1) / static_cast<double>(k1);
        if (std::abs(approx - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x)
            return std::make_pair(h1, k1);
        const double frac = r - a_d;
        if (frac <= 0.0) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

SecondMoment::SecondMoment(double value) : value_(value)
{
    if (!(value > 0.0)) throw std::invalid_argument("m_2 must be positive");
    exact_ = rational_approximation(value);
}

SecondMoment::SecondMoment(std::int64_t num, std::int64_t den)
{
    if (num <= 0 || den <= 0) throw std::invalid_argument("m_2 ratio must be positive");
    const std::int64_t g = std::gcd(num, den);
    exact_ = std::make_pair(num / g, den / g);
    value_ = static_cast<double>(num / g) / static_cast<double>(den / g);
}

double SecondMoment::eval(std::int64_t A, std::int64_t B) const
{
    if (exact_) {
        const auto [p, q] = *exact_;
        const __int128 num = static_cast<__int128>(A) * q + static_cast<__int128>(p) * B;
        return static_cast<double>(num) / static_cast<double>(q);
    }
    return static_cast<double>(A) + value_ * static_cast<double>(B);
}

bool SecondMoment::vanishes(std::int64_t A, std::int64_t B) const
{
    return sign(A, B) == 0;
}

int SecondMoment::sign(std::int64_t A, std::int64_t B) const
{
    if (exact_) {
        const auto [p, q] = *exact_;
        const __int128 num = static_cast<__int128>(A) * q + static_cast<__int128>(p) * B;
        return (num > 0) - (num < 0);
    }
    const double v = static_cast<double>(A) + value_ * static_cast<double>(B);
    if (std::abs(v) < 1e-9) return 0;
    return v > 0 ? 1 : -1;
}

std::string SecondMoment::describe() const
{
    std::ostringstream os;
    if (exact_)
        os << exact_->first << '/' << exact_->second;
    else
        os.precision(17), os << value_;
    return os.str();
}

}  // namespace clmf
