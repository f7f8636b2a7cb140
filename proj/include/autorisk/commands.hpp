#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "autorisk/config.hpp"

namespace autorisk::cli {

enum class Format { Text, Json, Csv };

Format parse_format(const std::string& name);

/// Thousands-separated rendering for text mode ("1,275,000.50"); fractional
/// cents are shown only when present.
std::string format_money(double amount);

std::string cmd_decompose(const ConfigDocument& cfg, std::optional<double> a_override,
                          Format format);

std::string cmd_counterfactual(const ConfigDocument& cfg, const std::string& baseline,
                               const std::string& intervention, Format format);

std::string cmd_allocate(const ConfigDocument& cfg, Format format);

std::string cmd_frontier(const ConfigDocument& cfg, int grid_size,
                         const std::optional<std::string>& out_csv_path, Format format);

std::string cmd_simulate(const ConfigDocument& cfg, std::optional<std::int64_t> n,
                         std::optional<std::uint64_t> seed,
                         const std::optional<std::string>& dump_csv_path, Format format);

std::string cmd_validate(const ConfigDocument& cfg, const std::string& method,
                         std::optional<std::uint64_t> seed,
                         std::optional<double> bandwidth, Format format);

std::string cmd_sensitivity(std::optional<double> evalue_rr,
                            std::optional<std::pair<double, double>> manski_args,
                            Format format);

struct PowerOptions {
    double gradient_ratio = 3.0;
    std::int64_t n_low = 75;
    std::int64_t n_total = 500;
    double alpha = 0.05;
    double base_rate_low = 0.1;
    std::int64_t reps = 2000;
    std::uint64_t seed = 0;
};

std::string cmd_power(const PowerOptions& opts, Format format);

} // namespace autorisk::cli
