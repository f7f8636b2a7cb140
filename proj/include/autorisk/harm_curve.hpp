#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "autorisk/errors.hpp"

namespace autorisk {

// Harm-propagation curve: probability that a failure executes into harm as a
// function of the automation level A in [0,1]. Every family is validated at
// construction to stay inside [0,1] and to be monotone nondecreasing
// (dense-sampled at 1,001 equispaced points).
enum class HarmFamily { Linear, Logistic, Threshold, Table, Power };

class HarmCurve {
public:
    struct LinearParams {
        double a0, p0, a1, p1; // the line through (a0,p0) and (a1,p1)
    };
    struct LogisticParams {
        double midpoint, steepness, lo, hi; // rescaled to hit lo at A=0, hi at A=1
    };
    struct ThresholdParams {
        double step_at, low, high; // low for A < step_at, high otherwise
    };
    struct TableParams {
        std::vector<std::pair<double, double>> knots; // strictly increasing A
    };
    struct PowerParams {
        double lo, hi, exponent; // lo + (hi-lo) * A^exponent
    };

    static HarmCurve linear_through(double a0, double p0, double a1, double p1);
    static HarmCurve logistic(double midpoint, double steepness, double lo, double hi);
    static HarmCurve threshold(double step_at, double low, double high);
    static HarmCurve table(std::vector<std::pair<double, double>> knots);
    static HarmCurve power(double lo, double hi, double exponent);

    HarmFamily family() const { return family_; }

    /// Curve value at a in [0,1].
    double value(double a) const;

    /// dP/dA at a. Analytic for LINEAR/LOGISTIC/POWER, exact segment slope
    /// for TABLE, zero for THRESHOLD away from the step. Throws
    /// NondifferentiableError exactly at a step or table knot.
    double derivative(double a) const;

    /// True when the curvature is provably >= 0 on [0,1].
    bool convex_family() const;

    /// True when derivative() succeeds everywhere on the open interval (0,1).
    bool differentiable_on_open_interval() const;

    /// Curve with the rise above its A=0 value scaled by `factor`:
    /// p'(A) = p(0) + factor * (p(A) - p(0)). Doubling `factor` doubles the
    /// slope everywhere. Construction re-validates range and monotonicity.
    HarmCurve with_slope_scaled(double factor) const;

    template <typename T>
    const T& params() const { return std::get<T>(params_); }

private:
    using Params = std::variant<LinearParams, LogisticParams, ThresholdParams,
                                TableParams, PowerParams>;

    HarmCurve(HarmFamily family, Params params);

    double eval_unchecked(double a) const;
    void validate_by_sampling() const;

    HarmFamily family_;
    Params params_;
};

} // namespace autorisk
