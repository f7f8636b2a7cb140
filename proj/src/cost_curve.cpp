#include "autorisk/cost_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "autorisk/errors.hpp"

namespace autorisk {

namespace {

constexpr int kValidationSamples = 1001;

void check_unit_interval(double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw DomainError("automation level out of [0,1]: " + std::to_string(a));
}

} // namespace

CostCurve::CostCurve(CostFamily family, Params params, MonotoneSense sense)
    : family_(family), params_(std::move(params)), sense_(sense) {
    validate_by_sampling();
}

CostCurve CostCurve::linear(double c0, double c1, MonotoneSense sense) {
    return CostCurve(CostFamily::Linear, LinearParams{c0, c1}, sense);
}

CostCurve CostCurve::quadratic(double c0, double c1, double c2, MonotoneSense sense) {
    return CostCurve(CostFamily::Quadratic, QuadraticParams{c0, c1, c2}, sense);
}

CostCurve CostCurve::exponential(double scale, double rate, double offset, MonotoneSense sense) {
    if (!(scale >= 0.0))
        throw DomainError("exponential cost curve requires scale >= 0");
    if (!(offset >= 0.0))
        throw DomainError("exponential cost curve requires offset >= 0");
    return CostCurve(CostFamily::Exponential, ExponentialParams{scale, rate, offset}, sense);
}

CostCurve CostCurve::table(std::vector<std::pair<double, double>> knots, MonotoneSense sense) {
    if (knots.size() < 2)
        throw DomainError("table cost curve needs at least two knots");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i].first > knots[i - 1].first))
            throw DomainError("table knots must be strictly increasing in A");
    return CostCurve(CostFamily::Table, TableParams{std::move(knots)}, sense);
}

double CostCurve::eval_unchecked(double a) const {
    switch (family_) {
    case CostFamily::Linear: {
        const auto& p = std::get<LinearParams>(params_);
        return p.c0 + p.c1 * a;
    }
    case CostFamily::Quadratic: {
        const auto& p = std::get<QuadraticParams>(params_);
        return p.c0 + p.c1 * a + p.c2 * a * a;
    }
    case CostFamily::Exponential: {
        const auto& p = std::get<ExponentialParams>(params_);
        return p.scale * std::exp(p.rate * a) + p.offset;
    }
    case CostFamily::Table: {
        const auto& knots = std::get<TableParams>(params_).knots;
        if (a <= knots.front().first) return knots.front().second;
        if (a >= knots.back().first) return knots.back().second;
        auto hi = std::upper_bound(knots.begin(), knots.end(), a,
                                   [](double x, const auto& k) { return x < k.first; });
        auto lo = hi - 1;
        const double t = (a - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }
    }
    throw DomainError("unknown cost curve family");
}

Money CostCurve::value(double a) const {
    check_unit_interval(a);
    return Money{eval_unchecked(a)};
}

double CostCurve::derivative(double a) const {
    check_unit_interval(a);
    switch (family_) {
    case CostFamily::Linear:
        return std::get<LinearParams>(params_).c1;
    case CostFamily::Quadratic: {
        const auto& p = std::get<QuadraticParams>(params_);
        return p.c1 + 2.0 * p.c2 * a;
    }
    case CostFamily::Exponential: {
        const auto& p = std::get<ExponentialParams>(params_);
        return p.scale * p.rate * std::exp(p.rate * a);
    }
    case CostFamily::Table: {
        const auto& knots = std::get<TableParams>(params_).knots;
        for (const auto& k : knots)
            if (a == k.first)
                throw NondifferentiableError("cost curve has a knot at A = " +
                                             std::to_string(k.first));
        if (a < knots.front().first || a > knots.back().first) return 0.0;
        auto hi = std::upper_bound(knots.begin(), knots.end(), a,
                                   [](double x, const auto& k) { return x < k.first; });
        auto lo = hi - 1;
        return (hi->second - lo->second) / (hi->first - lo->first);
    }
    }
    throw DomainError("unknown cost curve family");
}

bool CostCurve::convex_family() const {
    switch (family_) {
    case CostFamily::Linear:
        return true;
    case CostFamily::Quadratic:
        return std::get<QuadraticParams>(params_).c2 >= 0.0;
    case CostFamily::Exponential:
        return true; // scale >= 0 enforced at construction
    case CostFamily::Table:
        return false;
    }
    return false;
}

bool CostCurve::differentiable_on_open_interval() const {
    if (family_ != CostFamily::Table) return true;
    const auto& knots = std::get<TableParams>(params_).knots;
    return std::none_of(knots.begin(), knots.end(), [](const auto& k) {
        return k.first > 0.0 && k.first < 1.0;
    });
}

CostCurve CostCurve::scaled(double factor) const {
    if (!(factor >= 0.0))
        throw DomainError("cost scale factor must be >= 0");
    switch (family_) {
    case CostFamily::Linear: {
        const auto& p = std::get<LinearParams>(params_);
        return linear(factor * p.c0, factor * p.c1, sense_);
    }
    case CostFamily::Quadratic: {
        const auto& p = std::get<QuadraticParams>(params_);
        return quadratic(factor * p.c0, factor * p.c1, factor * p.c2, sense_);
    }
    case CostFamily::Exponential: {
        const auto& p = std::get<ExponentialParams>(params_);
        return exponential(factor * p.scale, p.rate, factor * p.offset, sense_);
    }
    case CostFamily::Table: {
        auto knots = std::get<TableParams>(params_).knots;
        for (auto& k : knots) k.second *= factor;
        return table(std::move(knots), sense_);
    }
    }
    throw DomainError("unknown cost curve family");
}

void CostCurve::validate_by_sampling() const {
    double prev = 0.0;
    for (int i = 0; i < kValidationSamples; ++i) {
        const double a = static_cast<double>(i) / (kValidationSamples - 1);
        const double v = eval_unchecked(a);
        if (!(v >= 0.0))
            throw DomainError("cost curve negative at A = " + std::to_string(a));
        if (i > 0) {
            const double tol = 1e-9 * std::max(1.0, std::abs(v) + std::abs(prev));
            if (sense_ == MonotoneSense::Nonincreasing && v > prev + tol)
                throw DomainError("cost curve declared nonincreasing but rises at A = " +
                                  std::to_string(a));
            if (sense_ == MonotoneSense::Nondecreasing && v < prev - tol)
                throw DomainError("cost curve declared nondecreasing but falls at A = " +
                                  std::to_string(a));
        }
        prev = v;
    }
}

CostModel::CostModel(CostCurve auto_curve, CostCurve oversight_curve)
    : c_auto(std::move(auto_curve)), c_oversight(std::move(oversight_curve)) {
    if (c_auto.sense() != MonotoneSense::Nonincreasing)
        throw DomainError("automation cost curve must be nonincreasing in A");
    if (c_oversight.sense() != MonotoneSense::Nonincreasing)
        throw DomainError("oversight cost curve must be nonincreasing in A");
}

} // namespace autorisk
