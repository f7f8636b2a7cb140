#include "autorisk/scenario.hpp"

namespace autorisk {

AutomationSpec AutomationSpec::scalar(double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw DomainError("scenario automation level out of [0,1]: " + std::to_string(a));
    return AutomationSpec(Spec{a});
}

AutomationSpec AutomationSpec::profile(AutomationProfile p, AggregationRule rule) {
    return AutomationSpec(Spec{std::make_pair(p, rule)});
}

double AutomationSpec::effective() const {
    if (const auto* a = std::get_if<double>(&spec_)) return *a;
    const auto& [profile, rule] = std::get<std::pair<AutomationProfile, AggregationRule>>(spec_);
    return aggregate_automation(profile, rule);
}

Scenario::Scenario(std::string name_, RiskModel risk_, AutomationSpec automation_,
                   std::int64_t decision_volume_, std::string period_label_)
    : name(std::move(name_)), risk(std::move(risk_)), automation(automation_),
      decision_volume(decision_volume_), period_label(std::move(period_label_)) {
    if (decision_volume < 0)
        throw DomainError("scenario '" + name + "': decision_volume must be >= 0");
}

ScenarioReport evaluate_scenario(const Scenario& s) {
    const double a = s.automation.effective();
    const Money per_decision = expected_loss(s.risk, a);
    const double n = static_cast<double>(s.decision_volume);
    const double incidents =
        n * s.risk.p_failure().value() * s.risk.harm_curve().value(a);
    return ScenarioReport{a, per_decision, per_decision * n, incidents};
}

CounterfactualReport counterfactual(const Scenario& baseline, const Scenario& intervention) {
    if (baseline.period_label != intervention.period_label)
        throw DomainError("counterfactual: period label mismatch ('" +
                          baseline.period_label + "' vs '" + intervention.period_label +
                          "')");
    const ScenarioReport b = evaluate_scenario(baseline);
    const ScenarioReport i = evaluate_scenario(intervention);
    if (b.loss_per_period.amount <= 0.0)
        throw DomainError("counterfactual: relative reduction undefined for zero "
                          "baseline loss");
    return CounterfactualReport{
        b, i, b.loss_per_period - i.loss_per_period,
        1.0 - i.loss_per_period / b.loss_per_period};
}

RoiReport roi(const CounterfactualReport& cf, Money intervention_cost) {
    if (!(intervention_cost.amount > 0.0))
        throw DomainError("roi: intervention cost must be positive");
    const Money gross = cf.absolute_delta;
    const Money net = gross - intervention_cost;
    return RoiReport{intervention_cost, gross, net, net / intervention_cost};
}

} // namespace autorisk
