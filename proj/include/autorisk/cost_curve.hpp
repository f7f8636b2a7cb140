#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "autorisk/types.hpp"

namespace autorisk {

enum class CostFamily { Linear, Quadratic, Exponential, Table };
enum class MonotoneSense { Nonincreasing, Nondecreasing };

/// Parametric cost-per-decision curve over the automation level A in [0,1].
/// Validated at construction: non-negative everywhere and consistent with
/// its declared monotone sense (dense-sampled).
class CostCurve {
public:
    struct LinearParams { double c0, c1; };                 // c0 + c1*A
    struct QuadraticParams { double c0, c1, c2; };          // c0 + c1*A + c2*A^2
    struct ExponentialParams { double scale, rate, offset; }; // scale*exp(rate*A) + offset
    struct TableParams { std::vector<std::pair<double, double>> knots; };

    static CostCurve linear(double c0, double c1, MonotoneSense sense);
    static CostCurve quadratic(double c0, double c1, double c2, MonotoneSense sense);
    static CostCurve exponential(double scale, double rate, double offset, MonotoneSense sense);
    static CostCurve table(std::vector<std::pair<double, double>> knots, MonotoneSense sense);

    CostFamily family() const { return family_; }
    MonotoneSense sense() const { return sense_; }

    Money value(double a) const;

    /// Amount per unit A; throws NondifferentiableError at table knots.
    double derivative(double a) const;

    bool convex_family() const;
    bool differentiable_on_open_interval() const;

    /// Curve with every value multiplied by factor >= 0.
    CostCurve scaled(double factor) const;

    template <typename T>
    const T& params() const { return std::get<T>(params_); }

private:
    using Params = std::variant<LinearParams, QuadraticParams, ExponentialParams, TableParams>;

    CostCurve(CostFamily family, Params params, MonotoneSense sense);

    double eval_unchecked(double a) const;
    void validate_by_sampling() const;

    CostFamily family_;
    Params params_;
    MonotoneSense sense_;
};

/// Cost side of the total-cost objective. Both curves are nonincreasing in A:
/// automating replaces per-decision operating cost, and oversight spend grows
/// as automation is dialled down.
struct CostModel {
    CostCurve c_auto;
    CostCurve c_oversight;

    CostModel(CostCurve auto_curve, CostCurve oversight_curve);
};

} // namespace autorisk
