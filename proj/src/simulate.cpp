#include "autorisk/simulate.hpp"

#include <cmath>

#include "autorisk/rng.hpp"

namespace autorisk {

SimResult simulate_incidents(const SimConfig& cfg) {
    if (cfg.n < 1) throw DomainError("simulation requires n >= 1");
    const double p_fail = cfg.risk.p_failure().value();
    const double p_exec = cfg.risk.harm_curve().value(cfg.a_level);

    SimResult result;
    result.dataset.records.resize(static_cast<std::size_t>(cfg.n));

    const SplitRng root(cfg.seed);
    double loss_sum = 0.0;
    double loss_sq_sum = 0.0;

    for (std::int64_t i = 0; i < cfg.n; ++i) {
        SplitRng rng = root.substream(static_cast<std::uint64_t>(i));
        IncidentRecord& r = result.dataset.records[static_cast<std::size_t>(i)];
        r.a_level = cfg.a_level;
        r.failed = rng.bernoulli(p_fail);
        if (r.failed) {
            r.executed = rng.bernoulli(p_exec);
            r.harmed = r.executed; // harm is certain given harmful execution
            if (r.harmed) r.loss = cfg.risk.severity_distribution().sample(rng);
        }
        loss_sum += r.loss;
        loss_sq_sum += r.loss * r.loss;
    }

    SimSummary& s = result.summary;
    s.n = cfg.n;
    for (const auto& r : result.dataset.records) {
        s.failures += r.failed;
        s.executions += r.executed;
        s.harms += r.harmed;
    }
    const double n = static_cast<double>(cfg.n);
    s.mean_loss = loss_sum / n;
    if (cfg.n > 1) {
        const double var = (loss_sq_sum - n * s.mean_loss * s.mean_loss) / (n - 1.0);
        s.mean_loss_std_error = std::sqrt(std::max(0.0, var) / n);
    }
    if (s.failures > 0) {
        s.p_harm_given_failure = static_cast<double>(s.harms) / s.failures;
        s.p_exec_given_failure = static_cast<double>(s.executions) / s.failures;
    }
    return result;
}

} // namespace autorisk
