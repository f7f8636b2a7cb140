#pragma once

#include <compare>
#include <string>

#include "autorisk/errors.hpp"

namespace autorisk {

/// Checked probability in [0,1]. Construction rejects NaN and out-of-range
/// values with a DomainError naming the offending value.
class Probability {
public:
    Probability() = default;

    explicit Probability(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("probability out of [0,1]: " + std::to_string(v));
    }

    double value() const { return value_; }

    auto operator<=>(const Probability&) const = default;

private:
    double value_{0.0};
};

/// Currency amount. Whether the amount is per decision or per period is a
/// property of the field that holds it, not of the type; deltas and gradients
/// may be negative, severities and costs are validated non-negative where
/// they are constructed.
struct Money {
    double amount{0.0};

    Money() = default;
    explicit Money(double a) : amount(a) {}

    auto operator<=>(const Money&) const = default;
};

inline Money operator+(Money a, Money b) { return Money{a.amount + b.amount}; }
inline Money operator-(Money a, Money b) { return Money{a.amount - b.amount}; }
inline Money operator-(Money a) { return Money{-a.amount}; }
inline Money operator*(Money a, double s) { return Money{a.amount * s}; }
inline Money operator*(double s, Money a) { return Money{s * a.amount}; }
inline Money operator/(Money a, double s) { return Money{a.amount / s}; }
inline double operator/(Money a, Money b) { return a.amount / b.amount; }

} // namespace autorisk
