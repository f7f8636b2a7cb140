#pragma once

#include <cstdint>

#include "autorisk/dataset.hpp"
#include "autorisk/risk_core.hpp"

namespace autorisk {

struct SimConfig {
    RiskModel risk;
    double a_level; // in [0,1]
    std::int64_t n; // >= 1
    std::uint64_t seed;
};

struct SimSummary {
    std::int64_t n{0};
    std::int64_t failures{0};
    std::int64_t executions{0};
    std::int64_t harms{0};
    double mean_loss{0.0};
    double mean_loss_std_error{0.0}; // sample standard error of the mean
    double p_harm_given_failure{0.0}; // 0 when no failures occurred
    double p_exec_given_failure{0.0};
};

struct SimResult {
    IncidentDataset dataset;
    SimSummary summary;
};

/// Monte Carlo run of the decomposition's execution semantics: per trial,
/// failure ~ Bernoulli(P(F)); a failed output executes with probability
/// P(H|F,A); harm equals execution; severity is drawn only on harm.
/// One RNG sub-stream per record index, so output is a pure function of
/// (config, seed).
SimResult simulate_incidents(const SimConfig& cfg);

} // namespace autorisk
