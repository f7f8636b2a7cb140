#pragma once

#include <cstdint>

#include "autorisk/dataset.hpp"

namespace autorisk {

/// Synthetic observational data-generating process for the causal-estimator
/// suite. Linear-probability design throughout, with clamping into [0,1]:
///
///   A_i   = clamp01( alpha0 + alpha1*Z_i + alpha2*X_i + eps_i )
///   pr_i  = clamp01( beta0 + beta1*A_i + beta2*X_i
///                    + gamma*[group=1] + delta*[time=1]
///                    + did_effect*[group=1][time=1]
///                    + rd_jump*[running_var >= rd_cutoff] + nu_i )
///   H_i   ~ Bernoulli(pr_i)
///
/// with X, Z standard normal, eps and nu normal with sd = noise_scale, and
/// running_var uniform on [rd_cutoff - 1, rd_cutoff + 1]. The confounder
/// enters both equations with the same weight (alpha2 = beta2 =
/// confounder_strength), which is what biases the naive regression of H on A.
/// alpha0 = 0.5, beta0 = 0.05, gamma = delta = 0.05 are fixed constants of
/// the generator. Groups and periods cycle through records (group = i mod 2,
/// time = (i/2) mod 2), giving a balanced 2x2 panel.
struct ObservationalConfig {
    std::int64_t n;             // >= 10
    double true_gradient;       // beta1
    double confounder_strength; // alpha2 and beta2
    double instrument_strength; // alpha1
    double noise_scale;         // sd of eps and nu
    double did_effect;
    double rd_cutoff;
    double rd_jump;
    std::uint64_t seed;
};

inline constexpr double kObsAlpha0 = 0.5;
inline constexpr double kObsBeta0 = 0.05;
inline constexpr double kObsGroupEffect = 0.05; // gamma, group 1
inline constexpr double kObsTimeEffect = 0.05;  // delta, period 1

/// Deterministic given (config, seed); one RNG sub-stream per record index.
/// Sets the dataset's degenerate_warning flag if more than 20% of rows had
/// either the automation level or the harm propensity clamped.
IncidentDataset generate_observational(const ObservationalConfig& cfg);

} // namespace autorisk
