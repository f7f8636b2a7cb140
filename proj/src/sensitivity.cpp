#include "autorisk/sensitivity.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <string>

#include "autorisk/errors.hpp"
#include "autorisk/rng.hpp"

namespace autorisk {

BoundsReport manski_bounds(Probability p_hat, double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("manski bounds: rho must be in [0,1); rho = " +
                          std::to_string(rho) + " leaves the rate unidentified");
    const double base = p_hat.value() * (1.0 - rho);
    return BoundsReport{p_hat, rho, Probability(base), Probability(base + rho)};
}

double e_value(double rr) {
    if (!(rr >= 1.0))
        throw DomainError("e-value is defined for risk ratios >= 1; invert the ratio "
                          "(use 1/rr) for protective associations");
    return rr + std::sqrt(rr * (rr - 1.0));
}

PowerResult power_analysis(double gradient_ratio, std::int64_t n_low,
                           std::int64_t n_total, double alpha,
                           Probability base_rate_low, std::int64_t reps,
                           std::uint64_t seed) {
    if (!(gradient_ratio > 0.0))
        throw DomainError("power analysis: gradient ratio must be positive");
    if (n_low < 1 || n_low > n_total)
        throw DomainError("power analysis: need 1 <= n_low <= n_total");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("power analysis: alpha must be in (0,1)");
    if (reps < 100)
        throw DomainError("power analysis: reps must be >= 100");
    const double p_low = base_rate_low.value();
    const double p_high = gradient_ratio * p_low;
    if (p_high > 1.0)
        throw DomainError("power analysis: base_rate_low * gradient_ratio = " +
                          std::to_string(p_high) + " exceeds 1");

    const boost::math::normal_distribution<double> norm;
    const double z_crit = boost::math::quantile(norm, 1.0 - alpha / 2.0);
    const std::int64_t n_high = n_total - n_low;

    const SplitRng root(seed);
    std::int64_t rejections = 0;
    for (std::int64_t rep = 0; rep < reps; ++rep) {
        SplitRng rng = root.substream(static_cast<std::uint64_t>(rep));
        std::int64_t k_low = 0, k_high = 0;
        for (std::int64_t i = 0; i < n_low; ++i) k_low += rng.bernoulli(p_low);
        for (std::int64_t i = 0; i < n_high; ++i) k_high += rng.bernoulli(p_high);

        const double ph_low = static_cast<double>(k_low) / n_low;
        const double ph_high = static_cast<double>(k_high) / n_high;
        const double pooled = static_cast<double>(k_low + k_high) / n_total;
        const double var = pooled * (1.0 - pooled) *
                           (1.0 / static_cast<double>(n_low) +
                            1.0 / static_cast<double>(n_high));
        if (var <= 0.0) continue; // all outcomes identical, nothing to reject
        const double z = (ph_high - ph_low) / std::sqrt(var);
        if (std::abs(z) >= z_crit) ++rejections;
    }

    const double power = static_cast<double>(rejections) / static_cast<double>(reps);
    const double half_width =
        1.959963984540054 * std::sqrt(power * (1.0 - power) / static_cast<double>(reps));
    return PowerResult{power, half_width, reps};
}

} // namespace autorisk
