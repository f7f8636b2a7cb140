#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "autorisk/observational.hpp"
#include "autorisk/policy.hpp"
#include "autorisk/scenario.hpp"

namespace autorisk {

struct SimulationBlock {
    std::optional<std::int64_t> n;
    std::optional<std::uint64_t> seed;
    std::optional<double> a;
};

struct ValidationBlock {
    std::int64_t n;
    double true_gradient;
    double confounder_strength;
    double instrument_strength;
    double noise_scale;
    double did_effect;
    double rd_cutoff;
    double rd_jump;
    std::optional<std::uint64_t> seed;
    double rd_bandwidth{0.5};

    ObservationalConfig to_config(std::uint64_t seed_value) const {
        return ObservationalConfig{n, true_gradient, confounder_strength,
                                   instrument_strength, noise_scale, did_effect,
                                   rd_cutoff, rd_jump, seed_value};
    }
};

// Parsed JSON configuration. Parsing is strict: unknown keys are rejected
// with the dotted field path, as are wrong-typed values. Scenario entries
// inherit the top-level risk/automation/volume/period blocks unless they
// override them, and are stored fully resolved.
struct ConfigDocument {
    std::string schema_version;
    std::optional<RiskModel> risk;
    std::optional<AutomationSpec> automation;
    std::optional<std::int64_t> decision_volume;
    std::optional<std::string> period_label;
    std::optional<CostModel> costs;
    std::optional<BudgetProblem> budget;
    std::vector<Scenario> scenarios;
    std::optional<SimulationBlock> simulation;
    std::optional<ValidationBlock> validation;

    static ConfigDocument parse(const nlohmann::json& j);
    static ConfigDocument parse_text(const std::string& text);
    static ConfigDocument load_file(const std::string& path);

    nlohmann::json to_json() const;

    /// Stable FNV-1a hash of the canonical serialization, as lowercase hex.
    std::string digest() const;

    const Scenario& find_scenario(const std::string& name) const;
};

nlohmann::json harm_curve_to_json(const HarmCurve& c);
nlohmann::json cost_curve_to_json(const CostCurve& c);
nlohmann::json return_curve_to_json(const ReturnCurve& c);

} // namespace autorisk
