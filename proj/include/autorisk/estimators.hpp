#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "autorisk/dataset.hpp"

namespace autorisk {

enum class EstimatorMethod { Ols, Iv2sls, Did, Rd };

struct EstimateReport {
    EstimatorMethod method;
    double point;
    double std_error; // conventional (homoskedastic) standard error
    std::int64_t n_used;
    std::optional<double> first_stage_f; // IV only
};

/// Record field selector for the generic regression entry point.
enum class Field {
    Failed, Executed, Harmed, Loss, ALevel, Covariate, Instrument, Group, Time,
    RunningVar
};

double field_value(const IncidentRecord& r, Field f);

/// OLS of `outcome` on an intercept plus `regressors`; reports the
/// coefficient and standard error of the FIRST regressor. Rank-deficient
/// designs raise SingularDesignError.
EstimateReport estimate_ols(const IncidentDataset& ds, Field outcome,
                            const std::vector<Field>& regressors);

/// Two-stage least squares: stage 1 regresses the automation level on the
/// instrument and the covariate, stage 2 regresses harm on the fitted level
/// and the covariate. A first-stage F below 10 raises WeakInstrumentError.
EstimateReport estimate_iv_2sls(const IncidentDataset& ds);

/// Two-way fixed-effects DiD: harm on group dummies, period dummies and the
/// Treat x Post interaction (treat = group != 0, post = time != 0). Requires
/// >= 2 groups, >= 2 periods and every group x period cell populated.
EstimateReport estimate_did(const IncidentDataset& ds);

/// Sharp regression discontinuity: plain local-linear fits on each side of
/// the cutoff within `bandwidth`; reports the jump in harm probability.
/// Requires >= 20 rows per side inside the window.
EstimateReport estimate_rd(const IncidentDataset& ds, double cutoff, double bandwidth);

} // namespace autorisk
