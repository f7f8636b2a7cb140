#include "autorisk/risk_core.hpp"

#include <cmath>
#include <string>

namespace autorisk {

AutomationProfile::AutomationProfile(double decision, double override_cap, double detection)
    : a_decision(decision), a_override(override_cap), a_detection(detection) {
    if (decision != 0.0 && decision != 0.5 && decision != 1.0)
        throw DomainError("a_decision must be exactly 0, 0.5 or 1, got " +
                          std::to_string(decision));
    if (!(override_cap >= 0.0 && override_cap <= 1.0))
        throw DomainError("a_override out of [0,1]: " + std::to_string(override_cap));
    if (!(detection >= 0.0 && detection <= 1.0))
        throw DomainError("a_detection out of [0,1]: " + std::to_string(detection));
}

double aggregate_automation(const AutomationProfile& p, AggregationRule rule) {
    switch (rule) {
    case AggregationRule::Max:
        return std::max({p.a_decision, p.a_override, p.a_detection});
    case AggregationRule::Mean:
        return (p.a_decision + p.a_override + p.a_detection) / 3.0;
    case AggregationRule::Product:
        return p.a_decision * p.a_override * p.a_detection;
    }
    throw DomainError("unknown aggregation rule");
}

SeverityDistribution SeverityDistribution::point(Money value) {
    if (!(value.amount >= 0.0))
        throw DomainError("severity must be non-negative");
    return SeverityDistribution(PointParams{value.amount});
}

SeverityDistribution SeverityDistribution::lognormal(double mu, double sigma) {
    if (!(sigma >= 0.0))
        throw DomainError("lognormal sigma must be >= 0");
    return SeverityDistribution(LognormalParams{mu, sigma});
}

double SeverityDistribution::mean() const {
    if (const auto* p = std::get_if<PointParams>(&params_)) return p->value;
    const auto& p = std::get<LognormalParams>(params_);
    return std::exp(p.mu + 0.5 * p.sigma * p.sigma);
}

double SeverityDistribution::sample(SplitRng& rng) const {
    if (const auto* p = std::get_if<PointParams>(&params_)) return p->value;
    const auto& p = std::get<LognormalParams>(params_);
    return rng.lognormal(p.mu, p.sigma);
}

RiskModel::RiskModel(Probability p_failure, HarmCurve harm_curve, Money severity_mean,
                     std::optional<SeverityDistribution> severity_distribution)
    : p_failure_(p_failure),
      harm_curve_(std::move(harm_curve)),
      severity_mean_(severity_mean),
      severity_distribution_(severity_distribution
                                 ? *std::move(severity_distribution)
                                 : SeverityDistribution::point(severity_mean)),
      explicit_distribution_(severity_distribution.has_value()) {
    if (!(severity_mean_.amount >= 0.0))
        throw DomainError("severity_mean must be non-negative");
    if (explicit_distribution_) {
        const double m = severity_distribution_.mean();
        const double scale = std::max(1.0, std::abs(severity_mean_.amount));
        if (std::abs(m - severity_mean_.amount) > 1e-9 * scale)
            throw DomainError("severity distribution mean " + std::to_string(m) +
                              " does not match severity_mean " +
                              std::to_string(severity_mean_.amount));
    }
}

Probability harm_probability(const RiskModel& model, double a) {
    // value() rejects a outside [0,1]; curve construction guarantees the
    // result is a probability.
    return Probability(model.harm_curve().value(a));
}

Money expected_loss(const RiskModel& model, double a) {
    return Money{model.p_failure().value() * model.harm_curve().value(a) *
                 model.severity_mean().amount};
}

Money loss_gradient(const RiskModel& model, double a) {
    return Money{model.p_failure().value() * model.harm_curve().derivative(a) *
                 model.severity_mean().amount};
}

double risk_elasticity(const RiskModel& model, double a) {
    if (!(a > 0.0 && a <= 1.0))
        throw DomainError("risk elasticity requires a in (0,1], got " + std::to_string(a));
    const double g = model.harm_curve().value(a);
    if (g <= 0.0)
        throw DomainError("risk elasticity undefined: P(H|F,A) = 0 at A = " +
                          std::to_string(a));
    return model.harm_curve().derivative(a) * a / g;
}

HarmPosterior bayes_update_harm(Probability prior,
                                Probability lf_h, Probability lf_nh,
                                Probability la_h, Probability la_nh) {
    const double numerator = lf_h.value() * la_h.value() * prior.value();
    const double denominator =
        numerator + lf_nh.value() * la_nh.value() * (1.0 - prior.value());
    if (denominator <= 0.0)
        throw DomainError("posterior undefined: zero normalizing constant");
    return HarmPosterior{prior, lf_h, lf_nh, la_h, la_nh,
                         Probability(numerator / denominator)};
}

} // namespace autorisk
