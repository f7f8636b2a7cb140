#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include "autorisk/risk_core.hpp"

namespace autorisk {

/// Automation level of a scenario: either a direct scalar ("A ~ 0.9" with no
/// dimension breakdown) or a full profile plus aggregation rule.
class AutomationSpec {
public:
    static AutomationSpec scalar(double a);
    static AutomationSpec profile(AutomationProfile p, AggregationRule rule);

    double effective() const;
    bool is_scalar() const { return std::holds_alternative<double>(spec_); }
    double scalar_value() const { return std::get<double>(spec_); }
    const std::pair<AutomationProfile, AggregationRule>& profile_value() const {
        return std::get<std::pair<AutomationProfile, AggregationRule>>(spec_);
    }

private:
    using Spec = std::variant<double, std::pair<AutomationProfile, AggregationRule>>;
    explicit AutomationSpec(Spec s) : spec_(std::move(s)) {}
    Spec spec_;
};

struct Scenario {
    std::string name;
    RiskModel risk;
    AutomationSpec automation;
    std::int64_t decision_volume; // N, decisions per period
    std::string period_label;     // opaque; compared for equality only

    Scenario(std::string name, RiskModel risk, AutomationSpec automation,
             std::int64_t decision_volume, std::string period_label);
};

struct ScenarioReport {
    double a_effective;
    Money loss_per_decision;
    Money loss_per_period;
    double expected_incidents_per_period; // N * P(F) * P(H|F,A)
};

struct CounterfactualReport {
    ScenarioReport baseline;
    ScenarioReport intervention;
    Money absolute_delta;      // baseline period loss minus intervention period loss
    double relative_reduction; // 1 - intervention/baseline, in (-inf, 1]
};

struct RoiReport {
    Money intervention_cost; // per period
    Money gross_benefit;     // per period
    Money net_benefit;       // per period
    double roi_multiple;     // net / cost
};

ScenarioReport evaluate_scenario(const Scenario& s);

/// Evaluate both scenarios and compare period losses. Scenarios must share a
/// period label; a zero-loss baseline has no defined relative reduction.
CounterfactualReport counterfactual(const Scenario& baseline, const Scenario& intervention);

RoiReport roi(const CounterfactualReport& cf, Money intervention_cost);

} // namespace autorisk
