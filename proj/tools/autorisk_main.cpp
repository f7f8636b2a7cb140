// autorisk -- expected-loss decomposition, automation policy optimization and
// the empirical-validation toolkit behind one JSON-config CLI.
//
// Exit codes: 0 success, 2 usage/config error, 3 domain error, 4 estimation
// failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "autorisk/commands.hpp"
#include "autorisk/errors.hpp"

namespace {

using autorisk::ConfigDocument;
namespace cli = autorisk::cli;

struct CommonArgs {
    std::string config_path;
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
    if (needs_config)
        cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--format", args.format, "output format: text, json or csv")
        ->default_val("text");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian automation-risk decomposition and policy toolkit"};
    app.require_subcommand(1);

    CommonArgs decompose_args;
    double decompose_a = -1.0;
    auto* decompose = app.add_subcommand(
        "decompose", "Print the risk triple and expected loss for one configuration");
    add_common(decompose, decompose_args);
    auto* decompose_a_opt =
        decompose->add_option("--a", decompose_a, "override the automation level");

    CommonArgs cf_args;
    std::string cf_baseline, cf_intervention;
    auto* cf = app.add_subcommand("counterfactual",
                                  "Compare two named scenarios from the config");
    add_common(cf, cf_args);
    cf->add_option("--baseline", cf_baseline, "baseline scenario name")->required();
    cf->add_option("--intervention", cf_intervention, "intervention scenario name")
        ->required();

    CommonArgs allocate_args;
    auto* allocate =
        app.add_subcommand("allocate", "Solve the validation budget allocation");
    add_common(allocate, allocate_args);

    CommonArgs frontier_args;
    int frontier_grid = 1001;
    std::string frontier_out;
    auto* frontier = app.add_subcommand(
        "frontier", "Efficient frontier of (total cost, expected loss) over A");
    add_common(frontier, frontier_args);
    frontier->add_option("--grid", frontier_grid, "grid size")->default_val(1001);
    auto* frontier_out_opt =
        frontier->add_option("--out", frontier_out, "write frontier CSV to this path");

    CommonArgs sim_args;
    std::int64_t sim_n = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_dump;
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo check of the decomposition at a fixed seed");
    add_common(simulate, sim_args);
    auto* sim_n_opt = simulate->add_option("--n", sim_n, "number of trials");
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "RNG seed (required "
                                              "here or in the config)");
    auto* sim_dump_opt =
        simulate->add_option("--dump", sim_dump, "write the record CSV to this path");

    CommonArgs val_args;
    std::string val_method;
    std::uint64_t val_seed = 0;
    double val_bandwidth = 0.0;
    auto* validate = app.add_subcommand(
        "validate", "Generate synthetic observational data and run an estimator");
    add_common(validate, val_args);
    validate->add_option("--method", val_method, "estimator: ols, iv, did or rd")
        ->required();
    auto* val_seed_opt = validate->add_option("--seed", val_seed, "RNG seed");
    auto* val_bw_opt =
        validate->add_option("--bandwidth", val_bandwidth, "RD bandwidth override");

    CommonArgs sens_args;
    double sens_rr = 0.0;
    std::vector<double> sens_manski;
    auto* sensitivity =
        app.add_subcommand("sensitivity", "E-value or Manski bounds for one estimate");
    add_common(sensitivity, sens_args, /*needs_config=*/false);
    auto* sens_rr_opt =
        sensitivity->add_option("--evalue", sens_rr, "risk ratio (>= 1)");
    auto* sens_manski_opt = sensitivity
                                ->add_option("--manski", sens_manski,
                                             "observed rate p_hat and unreported "
                                             "fraction rho")
                                ->expected(2);

    CommonArgs power_args;
    cli::PowerOptions power_opts;
    auto* power = app.add_subcommand(
        "power", "Simulated power of the two-proportion gradient test");
    add_common(power, power_args, /*needs_config=*/false);
    power->add_option("--gradient", power_opts.gradient_ratio, "harm-rate ratio")
        ->default_val(3.0);
    power->add_option("--n-low", power_opts.n_low, "low-automation sample size")
        ->default_val(75);
    power->add_option("--n-total", power_opts.n_total, "total sample size")
        ->default_val(500);
    power->add_option("--alpha", power_opts.alpha, "test level")->default_val(0.05);
    power->add_option("--base-rate", power_opts.base_rate_low,
                      "low-automation harm rate")
        ->default_val(0.1);
    power->add_option("--reps", power_opts.reps, "simulation replications")
        ->default_val(2000);
    auto* power_seed_opt =
        power->add_option("--seed", power_opts.seed, "RNG seed (required)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::string output;
        if (*decompose) {
            const auto cfg = ConfigDocument::load_file(decompose_args.config_path);
            std::optional<double> a;
            if (*decompose_a_opt) a = decompose_a;
            output = cli::cmd_decompose(cfg, a, cli::parse_format(decompose_args.format));
        } else if (*cf) {
            const auto cfg = ConfigDocument::load_file(cf_args.config_path);
            output = cli::cmd_counterfactual(cfg, cf_baseline, cf_intervention,
                                             cli::parse_format(cf_args.format));
        } else if (*allocate) {
            const auto cfg = ConfigDocument::load_file(allocate_args.config_path);
            output = cli::cmd_allocate(cfg, cli::parse_format(allocate_args.format));
        } else if (*frontier) {
            if (frontier_grid < 2) throw autorisk::ConfigError("grid must be >= 2");
            const auto cfg = ConfigDocument::load_file(frontier_args.config_path);
            std::optional<std::string> out;
            if (*frontier_out_opt) out = frontier_out;
            output = cli::cmd_frontier(cfg, frontier_grid, out,
                                       cli::parse_format(frontier_args.format));
        } else if (*simulate) {
            const auto cfg = ConfigDocument::load_file(sim_args.config_path);
            std::optional<std::int64_t> n;
            if (*sim_n_opt) n = sim_n;
            std::optional<std::uint64_t> seed;
            if (*sim_seed_opt) seed = sim_seed;
            std::optional<std::string> dump;
            if (*sim_dump_opt) dump = sim_dump;
            output = cli::cmd_simulate(cfg, n, seed, dump,
                                       cli::parse_format(sim_args.format));
        } else if (*validate) {
            const auto cfg = ConfigDocument::load_file(val_args.config_path);
            std::optional<std::uint64_t> seed;
            if (*val_seed_opt) seed = val_seed;
            std::optional<double> bandwidth;
            if (*val_bw_opt) bandwidth = val_bandwidth;
            output = cli::cmd_validate(cfg, val_method, seed, bandwidth,
                                       cli::parse_format(val_args.format));
        } else if (*sensitivity) {
            std::optional<double> rr;
            if (*sens_rr_opt) rr = sens_rr;
            std::optional<std::pair<double, double>> manski;
            if (*sens_manski_opt) manski = std::make_pair(sens_manski[0], sens_manski[1]);
            output = cli::cmd_sensitivity(rr, manski, cli::parse_format(sens_args.format));
        } else if (*power) {
            if (power_opts.reps < 100) throw autorisk::ConfigError("reps must be >= 100");
            if (!*power_seed_opt)
                throw autorisk::ConfigError("power: explicit --seed required; there is "
                                            "no wall-clock default");
            output = cli::cmd_power(power_opts, cli::parse_format(power_args.format));
        }
        std::cout << output;
        return 0;
    } catch (const autorisk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const autorisk::EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        return 4;
    } catch (const autorisk::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
