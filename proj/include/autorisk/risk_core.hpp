#pragma once

#include <optional>
#include <variant>

#include "autorisk/harm_curve.hpp"
#include "autorisk/rng.hpp"
#include "autorisk/types.hpp"

namespace autorisk {

// ---------------------------------------------------------------------------
// Automation parameterization
// ---------------------------------------------------------------------------

/// Three automation dimensions. Decision authority is discrete
/// (human decides / human approves / system decides); override and detection
/// are the inverses of override capability and detection speed.
struct AutomationProfile {
    double a_decision;  // exactly 0, 0.5 or 1
    double a_override;  // [0,1]
    double a_detection; // [0,1]

    AutomationProfile(double decision, double override_cap, double detection);
};

enum class AggregationRule { Max, Mean, Product };

/// Collapse the three dimensions into a scalar automation level. MAX is the
/// weakest-link aggregation: any single unchecked pathway sets the level.
double aggregate_automation(const AutomationProfile& profile, AggregationRule rule);

// ---------------------------------------------------------------------------
// Severity
// ---------------------------------------------------------------------------

/// Severity draw distribution, used only by the Monte Carlo simulator.
/// Defaults to a point mass at the model's mean severity.
class SeverityDistribution {
public:
    static SeverityDistribution point(Money value);
    static SeverityDistribution lognormal(double mu, double sigma);

    double mean() const;
    double sample(SplitRng& rng) const;

    bool is_point() const { return std::holds_alternative<PointParams>(params_); }

    struct PointParams { double value; };
    struct LognormalParams { double mu, sigma; };

    template <typename T>
    const T& params() const { return std::get<T>(params_); }

private:
    using Params = std::variant<PointParams, LognormalParams>;
    explicit SeverityDistribution(Params p) : params_(std::move(p)) {}
    Params params_;
};

// ---------------------------------------------------------------------------
// Risk model
// ---------------------------------------------------------------------------

/// The decomposition triple: P(F), the harm-propagation curve P(H|F,A), and
/// the mean severity E[S|H]. If a severity distribution is supplied its mean
/// must match severity_mean within 1e-9 relative.
class RiskModel {
public:
    RiskModel(Probability p_failure, HarmCurve harm_curve, Money severity_mean,
              std::optional<SeverityDistribution> severity_distribution = std::nullopt);

    const Probability& p_failure() const { return p_failure_; }
    const HarmCurve& harm_curve() const { return harm_curve_; }
    const Money& severity_mean() const { return severity_mean_; }
    const SeverityDistribution& severity_distribution() const { return severity_distribution_; }
    bool has_explicit_distribution() const { return explicit_distribution_; }

private:
    Probability p_failure_;
    HarmCurve harm_curve_;
    Money severity_mean_;
    SeverityDistribution severity_distribution_;
    bool explicit_distribution_;
};

/// P(H|F,A) at automation level a.
Probability harm_probability(const RiskModel& model, double a);

/// Expected loss per decision: P(F) * P(H|F,A) * E[S|H].
Money expected_loss(const RiskModel& model, double a);

/// Marginal effect of automation on expected loss:
/// P(F) * dP(H|F,A)/dA * E[S|H]. Money per unit A; may be zero, never
/// negative for valid (monotone) curves.
Money loss_gradient(const RiskModel& model, double a);

/// Elasticity of expected loss with respect to automation,
/// d log E[Loss] / d log A. Requires a > 0 and P(H|F,a) > 0.
double risk_elasticity(const RiskModel& model, double a);

// ---------------------------------------------------------------------------
// Bayesian updating
// ---------------------------------------------------------------------------

struct HarmPosterior {
    Probability prior;
    Probability likelihood_f_given_h;
    Probability likelihood_f_given_not_h;
    Probability likelihood_a_given_h;
    Probability likelihood_a_given_not_h;
    Probability posterior;
};

/// One Bayes step for the harm probability, treating the failure pattern and
/// the automation level as conditionally independent given harm. Supports
/// sequential chaining by feeding the posterior back in as the next prior.
HarmPosterior bayes_update_harm(Probability prior,
                                Probability lf_h, Probability lf_nh,
                                Probability la_h, Probability la_nh);

} // namespace autorisk
