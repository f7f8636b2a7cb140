#include "autorisk/harm_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace autorisk {

namespace {

constexpr int kValidationSamples = 1001;
constexpr double kMonotoneTol = 1e-12;

void check_unit_interval(double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw DomainError("automation level out of [0,1]: " + std::to_string(a));
}

double logistic_shape(double a, double midpoint, double steepness) {
    return 1.0 / (1.0 + std::exp(-steepness * (a - midpoint)));
}

} // namespace

HarmCurve::HarmCurve(HarmFamily family, Params params)
    : family_(family), params_(std::move(params)) {
    validate_by_sampling();
}

HarmCurve HarmCurve::linear_through(double a0, double p0, double a1, double p1) {
    if (a0 == a1)
        throw DomainError("linear harm curve needs two distinct anchor points");
    return HarmCurve(HarmFamily::Linear, LinearParams{a0, p0, a1, p1});
}

HarmCurve HarmCurve::logistic(double midpoint, double steepness, double lo, double hi) {
    if (!(steepness > 0.0))
        throw DomainError("logistic harm curve requires steepness > 0");
    if (!(lo <= hi))
        throw DomainError("logistic harm curve requires lo <= hi");
    return HarmCurve(HarmFamily::Logistic, LogisticParams{midpoint, steepness, lo, hi});
}

HarmCurve HarmCurve::threshold(double step_at, double low, double high) {
    if (!(step_at >= 0.0 && step_at <= 1.0))
        throw DomainError("threshold step location out of [0,1]");
    if (!(low <= high))
        throw DomainError("threshold harm curve requires low <= high");
    return HarmCurve(HarmFamily::Threshold, ThresholdParams{step_at, low, high});
}

HarmCurve HarmCurve::table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw DomainError("table harm curve needs at least two knots");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i].first > knots[i - 1].first))
            throw DomainError("table knots must be strictly increasing in A");
    return HarmCurve(HarmFamily::Table, TableParams{std::move(knots)});
}

HarmCurve HarmCurve::power(double lo, double hi, double exponent) {
    if (!(exponent > 0.0))
        throw DomainError("power harm curve requires exponent > 0");
    if (!(lo <= hi))
        throw DomainError("power harm curve requires lo <= hi");
    return HarmCurve(HarmFamily::Power, PowerParams{lo, hi, exponent});
}

double HarmCurve::eval_unchecked(double a) const {
    switch (family_) {
    case HarmFamily::Linear: {
        const auto& p = std::get<LinearParams>(params_);
        const double slope = (p.p1 - p.p0) / (p.a1 - p.a0);
        return p.p0 + slope * (a - p.a0);
    }
    case HarmFamily::Logistic: {
        const auto& p = std::get<LogisticParams>(params_);
        const double s0 = logistic_shape(0.0, p.midpoint, p.steepness);
        const double s1 = logistic_shape(1.0, p.midpoint, p.steepness);
        const double s = logistic_shape(a, p.midpoint, p.steepness);
        return p.lo + (p.hi - p.lo) * (s - s0) / (s1 - s0);
    }
    case HarmFamily::Threshold: {
        const auto& p = std::get<ThresholdParams>(params_);
        return a < p.step_at ? p.low : p.high;
    }
    case HarmFamily::Table: {
        const auto& knots = std::get<TableParams>(params_).knots;
        // Extrapolation beyond the knot range clamps to the end values.
        if (a <= knots.front().first) return knots.front().second;
        if (a >= knots.back().first) return knots.back().second;
        auto hi = std::upper_bound(knots.begin(), knots.end(), a,
                                   [](double x, const auto& k) { return x < k.first; });
        auto lo = hi - 1;
        const double t = (a - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }
    case HarmFamily::Power: {
        const auto& p = std::get<PowerParams>(params_);
        return p.lo + (p.hi - p.lo) * std::pow(a, p.exponent);
    }
    }
    throw DomainError("unknown harm curve family");
}

double HarmCurve::value(double a) const {
    check_unit_interval(a);
    return eval_unchecked(a);
}

double HarmCurve::derivative(double a) const {
    check_unit_interval(a);
    switch (family_) {
    case HarmFamily::Linear: {
        const auto& p = std::get<LinearParams>(params_);
        return (p.p1 - p.p0) / (p.a1 - p.a0);
    }
    case HarmFamily::Logistic: {
        const auto& p = std::get<LogisticParams>(params_);
        const double s0 = logistic_shape(0.0, p.midpoint, p.steepness);
        const double s1 = logistic_shape(1.0, p.midpoint, p.steepness);
        const double s = logistic_shape(a, p.midpoint, p.steepness);
        return (p.hi - p.lo) * p.steepness * s * (1.0 - s) / (s1 - s0);
    }
    case HarmFamily::Threshold: {
        const auto& p = std::get<ThresholdParams>(params_);
        if (a == p.step_at)
            throw NondifferentiableError("harm curve has a step at A = " +
                                         std::to_string(p.step_at));
        return 0.0;
    }
    case HarmFamily::Table: {
        const auto& knots = std::get<TableParams>(params_).knots;
        for (const auto& k : knots)
            if (a == k.first)
                throw NondifferentiableError("harm curve has a knot at A = " +
                                             std::to_string(k.first));
        if (a < knots.front().first || a > knots.back().first)
            return 0.0; // clamped region
        auto hi = std::upper_bound(knots.begin(), knots.end(), a,
                                   [](double x, const auto& k) { return x < k.first; });
        auto lo = hi - 1;
        return (hi->second - lo->second) / (hi->first - lo->first);
    }
    case HarmFamily::Power: {
        const auto& p = std::get<PowerParams>(params_);
        if (a == 0.0 && p.exponent < 1.0)
            throw NondifferentiableError("power harm curve has infinite slope at A = 0");
        if (a == 0.0 && p.exponent == 1.0) return p.hi - p.lo;
        return (p.hi - p.lo) * p.exponent * std::pow(a, p.exponent - 1.0);
    }
    }
    throw DomainError("unknown harm curve family");
}

bool HarmCurve::convex_family() const {
    switch (family_) {
    case HarmFamily::Linear:
        return true; // affine
    case HarmFamily::Power:
        return std::get<PowerParams>(params_).exponent >= 1.0;
    default:
        return false;
    }
}

bool HarmCurve::differentiable_on_open_interval() const {
    switch (family_) {
    case HarmFamily::Linear:
    case HarmFamily::Logistic:
    case HarmFamily::Power:
        return true;
    case HarmFamily::Threshold:
        return false;
    case HarmFamily::Table: {
        const auto& knots = std::get<TableParams>(params_).knots;
        return std::none_of(knots.begin(), knots.end(), [](const auto& k) {
            return k.first > 0.0 && k.first < 1.0;
        });
    }
    }
    return false;
}

HarmCurve HarmCurve::with_slope_scaled(double factor) const {
    if (!(factor >= 0.0))
        throw DomainError("slope scale factor must be >= 0");
    const double base = eval_unchecked(0.0);
    auto rescale = [&](double p) { return base + factor * (p - base); };
    switch (family_) {
    case HarmFamily::Linear: {
        const auto& p = std::get<LinearParams>(params_);
        return linear_through(p.a0, rescale(p.p0), p.a1, rescale(p.p1));
    }
    case HarmFamily::Logistic: {
        const auto& p = std::get<LogisticParams>(params_);
        return logistic(p.midpoint, p.steepness, rescale(p.lo), rescale(p.hi));
    }
    case HarmFamily::Threshold: {
        const auto& p = std::get<ThresholdParams>(params_);
        return threshold(p.step_at, rescale(p.low), rescale(p.high));
    }
    case HarmFamily::Table: {
        auto knots = std::get<TableParams>(params_).knots;
        for (auto& k : knots) k.second = rescale(k.second);
        return table(std::move(knots));
    }
    case HarmFamily::Power: {
        const auto& p = std::get<PowerParams>(params_);
        return power(rescale(p.lo), rescale(p.hi), p.exponent);
    }
    }
    throw DomainError("unknown harm curve family");
}

void HarmCurve::validate_by_sampling() const {
    double prev = 0.0;
    for (int i = 0; i < kValidationSamples; ++i) {
        const double a = static_cast<double>(i) / (kValidationSamples - 1);
        const double v = eval_unchecked(a);
        if (!(v >= -kMonotoneTol && v <= 1.0 + kMonotoneTol))
            throw DomainError("harm curve leaves [0,1] at A = " + std::to_string(a) +
                              " (value " + std::to_string(v) + ")");
        if (i > 0 && v < prev - kMonotoneTol)
            throw DomainError("harm curve is not monotone nondecreasing at A = " +
                              std::to_string(a));
        prev = v;
    }
}

} // namespace autorisk
