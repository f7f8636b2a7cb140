#pragma once

#include <cstdint>

#include "autorisk/types.hpp"

namespace autorisk {

struct BoundsReport {
    Probability p_hat;
    double rho; // unreported fraction, in [0,1)
    Probability lower;
    Probability upper;
};

/// Worst-case partial-identification bounds for a rate observed only on the
/// reported fraction (1 - rho): the unreported mass is treated as all-zero
/// for the lower bound and all-one for the upper.
///   lower = p_hat * (1 - rho),   upper = p_hat * (1 - rho) + rho.
BoundsReport manski_bounds(Probability p_hat, double rho);

/// Minimum joint association strength an unmeasured confounder needs with
/// both exposure and outcome to fully explain an observed risk ratio:
/// rr + sqrt(rr * (rr - 1)). Defined for rr >= 1; invert risk-decreasing
/// ratios before calling.
double e_value(double rr);

struct PowerResult {
    double power;         // rejection frequency
    double mc_half_width; // 1.96 * sqrt(power*(1-power)/reps)
    std::int64_t reps;
};

/// Simulated power of a two-sided two-proportion z-test for detecting a harm
/// rate gradient: the high-automation arm has rate gradient_ratio *
/// base_rate_low against n_low low-automation and (n_total - n_low)
/// high-automation observations. Deterministic given seed.
PowerResult power_analysis(double gradient_ratio, std::int64_t n_low,
                           std::int64_t n_total, double alpha,
                           Probability base_rate_low, std::int64_t reps,
                           std::uint64_t seed);

} // namespace autorisk
