#include "autorisk/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "autorisk/errors.hpp"

namespace autorisk {

namespace {

void append_real(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

double parse_real(const std::string& field, std::size_t row, const char* name) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("csv row " + std::to_string(row) + ": bad " + name + " '" +
                          field + "'");
    return v;
}

bool parse_flag(const std::string& field, std::size_t row, const char* name) {
    if (field == "0") return false;
    if (field == "1") return true;
    throw ConfigError("csv row " + std::to_string(row) + ": " + name +
                      " must be 0 or 1, got '" + field + "'");
}

} // namespace

void IncidentRecord::check_invariants(std::size_t row) const {
    if (harmed && !executed)
        throw DomainError("record " + std::to_string(row) + ": harmed without execution");
    if (executed && !failed)
        throw DomainError("record " + std::to_string(row) + ": executed without failure");
    if (loss > 0.0 && !harmed)
        throw DomainError("record " + std::to_string(row) + ": positive loss without harm");
    if (loss < 0.0)
        throw DomainError("record " + std::to_string(row) + ": negative loss");
}

void write_incident_csv(const IncidentDataset& ds, std::ostream& out) {
    out << to_incident_csv(ds);
}

std::string to_incident_csv(const IncidentDataset& ds) {
    std::string out;
    out.reserve(64 * (ds.records.size() + 1));
    out += kIncidentCsvHeader;
    out += '\n';
    for (const auto& r : ds.records) {
        out += r.failed ? '1' : '0';
        out += ',';
        out += r.executed ? '1' : '0';
        out += ',';
        out += r.harmed ? '1' : '0';
        out += ',';
        append_real(out, r.loss);
        out += ',';
        append_real(out, r.a_level);
        out += ',';
        append_real(out, r.covariate);
        out += ',';
        append_real(out, r.instrument);
        out += ',';
        out += std::to_string(r.group);
        out += ',';
        out += std::to_string(r.time);
        out += ',';
        append_real(out, r.running_var);
        out += '\n';
    }
    return out;
}

IncidentDataset read_incident_csv(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_incident_csv(buf.str());
}

IncidentDataset parse_incident_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("csv: empty input");
    if (line == std::string(kIncidentCsvHeader) + "\r") line.pop_back();
    if (line != kIncidentCsvHeader)
        throw ConfigError("csv: unexpected header '" + line + "'");

    IncidentDataset ds;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 10)
            throw ConfigError("csv row " + std::to_string(row) + ": expected 10 fields, got " +
                              std::to_string(fields.size()));
        IncidentRecord r;
        r.failed = parse_flag(fields[0], row, "failed");
        r.executed = parse_flag(fields[1], row, "executed");
        r.harmed = parse_flag(fields[2], row, "harmed");
        r.loss = parse_real(fields[3], row, "loss");
        r.a_level = parse_real(fields[4], row, "a_level");
        r.covariate = parse_real(fields[5], row, "covariate");
        r.instrument = parse_real(fields[6], row, "instrument");
        r.group = static_cast<int>(parse_real(fields[7], row, "group"));
        r.time = static_cast<int>(parse_real(fields[8], row, "time"));
        r.running_var = parse_real(fields[9], row, "running_var");
        r.check_invariants(row);
        ds.records.push_back(r);
    }
    return ds;
}

} // namespace autorisk
