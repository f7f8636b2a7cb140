#include "autorisk/observational.hpp"

#include <algorithm>

#include "autorisk/errors.hpp"
#include "autorisk/rng.hpp"

namespace autorisk {

IncidentDataset generate_observational(const ObservationalConfig& cfg) {
    if (cfg.n < 10) throw DomainError("observational generator requires n >= 10");
    if (!(cfg.noise_scale >= 0.0)) throw DomainError("noise_scale must be >= 0");

    IncidentDataset ds;
    ds.records.resize(static_cast<std::size_t>(cfg.n));

    const SplitRng root(cfg.seed);
    std::int64_t clamped_rows = 0;

    for (std::int64_t i = 0; i < cfg.n; ++i) {
        SplitRng rng = root.substream(static_cast<std::uint64_t>(i));
        IncidentRecord& r = ds.records[static_cast<std::size_t>(i)];

        // Fixed draw order per record: X, Z, eps, nu, running_var, harm.
        r.covariate = rng.normal();
        r.instrument = rng.normal();
        const double eps = rng.normal(0.0, cfg.noise_scale);
        const double nu = rng.normal(0.0, cfg.noise_scale);
        r.running_var = rng.uniform(cfg.rd_cutoff - 1.0, cfg.rd_cutoff + 1.0);

        r.group = static_cast<int>(i % 2);
        r.time = static_cast<int>((i / 2) % 2);

        bool clamped = false;
        const double a_raw = kObsAlpha0 + cfg.instrument_strength * r.instrument +
                             cfg.confounder_strength * r.covariate + eps;
        r.a_level = std::clamp(a_raw, 0.0, 1.0);
        clamped |= (r.a_level != a_raw);

        const bool treat_post = r.group == 1 && r.time == 1;
        const double pr_raw = kObsBeta0 + cfg.true_gradient * r.a_level +
                              cfg.confounder_strength * r.covariate +
                              (r.group == 1 ? kObsGroupEffect : 0.0) +
                              (r.time == 1 ? kObsTimeEffect : 0.0) +
                              (treat_post ? cfg.did_effect : 0.0) +
                              (r.running_var >= cfg.rd_cutoff ? cfg.rd_jump : 0.0) + nu;
        const double pr = std::clamp(pr_raw, 0.0, 1.0);
        clamped |= (pr != pr_raw);

        r.harmed = rng.bernoulli(pr);
        // Observational records carry only the harm outcome; the execution
        // chain is collapsed so the dataset invariants still hold.
        r.failed = r.harmed;
        r.executed = r.harmed;

        clamped_rows += clamped;
    }

    ds.degenerate_warning =
        static_cast<double>(clamped_rows) > 0.2 * static_cast<double>(cfg.n);
    return ds;
}

} // namespace autorisk
