#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace autorisk {

/// One observation. Execution-semantics invariants hold for every record:
/// harmed implies executed implies failed, and a positive loss implies harm.
struct IncidentRecord {
    bool failed{false};
    bool executed{false};
    bool harmed{false};
    double loss{0.0};      // severity draw; 0 when unharmed
    double a_level{0.0};
    double covariate{0.0};  // X, the confounder
    double instrument{0.0}; // Z
    int group{0};           // j, for DiD
    int time{0};            // t, for DiD
    double running_var{0.0}; // for RD

    void check_invariants(std::size_t row) const;
};

struct IncidentDataset {
    std::vector<IncidentRecord> records;
    bool degenerate_warning{false}; // generator clamped > 20% of rows

    std::size_t size() const { return records.size(); }
};

inline constexpr const char* kIncidentCsvHeader =
    "failed,executed,harmed,loss,a_level,covariate,instrument,group,time,running_var";

/// Fixed-header CSV, booleans as 0/1, reals in full-precision decimal.
void write_incident_csv(const IncidentDataset& ds, std::ostream& out);
std::string to_incident_csv(const IncidentDataset& ds);

/// Parse and validate; throws ConfigError on malformed rows, DomainError on
/// invariant violations.
IncidentDataset read_incident_csv(std::istream& in);
IncidentDataset parse_incident_csv(const std::string& text);

} // namespace autorisk
