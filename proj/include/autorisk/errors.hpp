#pragma once

#include <stdexcept>
#include <string>

namespace autorisk {

// Error taxonomy mirrors the CLI exit-code contract:
//   ConfigError -> 2 (usage / malformed input)
//   DomainError -> 3 (valid syntax, out-of-domain values or undefined results)
//   EstimationError -> 4 (an estimator declined to produce a number)
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Derivative requested exactly at a step or table knot.
struct NondifferentiableError : DomainError {
    using DomainError::DomainError;
};

// Optimizer given a curve family it cannot differentiate on (0,1).
struct UnsupportedCurveError : DomainError {
    using DomainError::DomainError;
};

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularDesignError : EstimationError {
    using EstimationError::EstimationError;
};

struct WeakInstrumentError : EstimationError {
    using EstimationError::EstimationError;
};

struct IncompletePanelError : EstimationError {
    using EstimationError::EstimationError;
};

struct SparseWindowError : EstimationError {
    using EstimationError::EstimationError;
};

} // namespace autorisk
