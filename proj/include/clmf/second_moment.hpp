#ifndef CLMF_SECOND_MOMENT_HPP
#define CLMF_SECOND_MOMENT_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace clmf {

// m_2 together with an exact ratio p/q when one is known.  Quantities of the
// form A + m_2 B with integer A, B are then decided exactly.
class SecondMoment {
public:
    explicit SecondMoment(double value);  // detects small-denominator rationals
    SecondMoment(std::int64_t num, std::int64_t den);

    double value() const { return value_; }
    bool is_rational() const { return exact_.has_value(); }
    std::int64_t numerator() const { return exact_ ? exact_->first : 0; }
    std::int64_t denominator() const { return exact_ ? exact_->second : 0; }

    // A + m_2 B; the same exact value always yields the same double.
    double eval(std::int64_t A, std::int64_t B) const;
    // A + m_2 B == 0, exactly when rational, else within 1e-9.
    bool vanishes(std::int64_t A, std::int64_t B) const;
    // Sign of A + m_2 B (0 when it vanishes).
    int sign(std::int64_t A, std::int64_t B) const;

    std::string describe() const;

private:
    double value_;
    std::optional<std::pair<std::int64_t, std::int64_t>> exact_;
};

// Continued-fraction search for p/q (q <= max_den) equal to x up to a few ulps.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(double x,
                                                                           std::int64_t max_den = 1000000);

}  // namespace clmf

#endif
