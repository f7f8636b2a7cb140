#include "autorisk/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "autorisk/errors.hpp"
#include "autorisk/estimators.hpp"
#include "autorisk/sensitivity.hpp"
#include "autorisk/simulate.hpp"

namespace autorisk::cli {

namespace {

using nlohmann::json;

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string render_json(const std::string& command, const std::string& digest,
                        json body, const std::vector<std::string>& warnings) {
    const json envelope{{"command", command},
                        {"inputs_digest", digest},
                        {"warnings", warnings},
                        {"body", std::move(body)}};
    return envelope.dump(2) + "\n";
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

std::string pct1(double fraction) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
    return std::string(buf);
}

void append_warnings(std::string& text, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) text += "warning: " + w + "\n";
}

double effective_a(const ConfigDocument& cfg, std::optional<double> a_override,
                   const char* who) {
    if (a_override) {
        if (!(*a_override >= 0.0 && *a_override <= 1.0))
            throw DomainError(std::string(who) + ": --a out of [0,1]");
        return *a_override;
    }
    if (cfg.automation) return cfg.automation->effective();
    throw ConfigError(std::string(who) +
                      ": no automation level (provide an automation block or --a)");
}

const RiskModel& require_risk(const ConfigDocument& cfg, const char* who) {
    if (!cfg.risk) throw ConfigError(std::string(who) + ": config has no risk block");
    return *cfg.risk;
}

json scenario_report_json(const Scenario& s, const ScenarioReport& r) {
    return json{{"name", s.name},
                {"a_effective", r.a_effective},
                {"loss_per_decision", r.loss_per_decision.amount},
                {"loss_per_period", r.loss_per_period.amount},
                {"expected_incidents_per_period", r.expected_incidents_per_period},
                {"decision_volume", s.decision_volume},
                {"period", s.period_label}};
}

} // namespace

Format parse_format(const std::string& name) {
    if (name == "text") return Format::Text;
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    throw ConfigError("unknown format '" + name + "' (expected text, json or csv)");
}

std::string format_money(double amount) {
    const bool negative = amount < 0;
    const double abs_amount = std::abs(amount);
    double integral = 0.0;
    double frac = std::modf(abs_amount, &integral);

    char digits[40];
    std::snprintf(digits, sizeof(digits), "%.0f", integral);
    std::string grouped;
    const std::string raw(digits);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (i > 0 && (raw.size() - i) % 3 == 0) grouped += ',';
        grouped += raw[i];
    }

    std::string out = (negative ? "-$" : "$") + grouped;
    if (frac > 1e-9 && frac < 1.0 - 1e-9) {
        char cents[8];
        std::snprintf(cents, sizeof(cents), "%.2f", frac);
        out += std::string(cents).substr(1); // ".xx"
    }
    return out;
}

std::string cmd_decompose(const ConfigDocument& cfg, std::optional<double> a_override,
                          Format format) {
    const RiskModel& risk = require_risk(cfg, "decompose");
    const double a = effective_a(cfg, a_override, "decompose");
    const double p_f = risk.p_failure().value();
    const double p_h = harm_probability(risk, a).value();
    const Money per_decision = expected_loss(risk, a);

    std::vector<std::string> warnings;
    if (p_f == 0.0) warnings.push_back("degenerate: no failure risk");

    json body{{"p_failure", p_f},
              {"p_harm_given_failure", p_h},
              {"severity_mean", risk.severity_mean().amount},
              {"effective_a", a},
              {"loss_per_decision", per_decision.amount}};
    if (cfg.decision_volume) {
        const double n = static_cast<double>(*cfg.decision_volume);
        body["decision_volume"] = *cfg.decision_volume;
        body["loss_per_period"] = per_decision.amount * n;
        body["expected_incidents_per_period"] = n * p_f * p_h;
        if (cfg.period_label) body["period"] = *cfg.period_label;
    }

    if (format == Format::Json)
        return render_json("decompose", cfg.digest(), std::move(body), warnings);

    if (format == Format::Csv) {
        std::string csv = "p_failure,p_harm_given_failure,severity_mean,effective_a,"
                          "loss_per_decision,loss_per_period,expected_incidents_per_period\n";
        char row[256];
        if (cfg.decision_volume) {
            const double n = static_cast<double>(*cfg.decision_volume);
            std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          p_f, p_h, risk.severity_mean().amount, a, per_decision.amount,
                          per_decision.amount * n, n * p_f * p_h);
        } else {
            std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g,%.17g,,\n", p_f, p_h,
                          risk.severity_mean().amount, a, per_decision.amount);
        }
        return csv + row;
    }

    std::string text;
    text += "expected-loss decomposition\n";
    text += "  P(F)             " + num(p_f) + "\n";
    text += "  P(H|F,A)         " + num(p_h) + "\n";
    text += "  E[S|H]           " + format_money(risk.severity_mean().amount) + "\n";
    text += "  effective A      " + num(a) + "\n";
    text += "  loss/decision    " + format_money(per_decision.amount) + "\n";
    if (cfg.decision_volume) {
        const double n = static_cast<double>(*cfg.decision_volume);
        const std::string period = cfg.period_label.value_or("period");
        text += "  loss/" + period + "       " + format_money(per_decision.amount * n) +
                "  (N = " + std::to_string(*cfg.decision_volume) + ")\n";
        text += "  incidents/" + period + "  " + num(n * p_f * p_h) + "\n";
    }
    append_warnings(text, warnings);
    return text;
}

std::string cmd_counterfactual(const ConfigDocument& cfg, const std::string& baseline,
                               const std::string& intervention, Format format) {
    if (format == Format::Csv)
        throw ConfigError("counterfactual: csv format not supported");
    const Scenario& b = cfg.find_scenario(baseline);
    const Scenario& i = cfg.find_scenario(intervention);
    const CounterfactualReport cf = counterfactual(b, i);

    json body{{"baseline", scenario_report_json(b, cf.baseline)},
              {"intervention", scenario_report_json(i, cf.intervention)},
              {"absolute_delta", cf.absolute_delta.amount},
              {"relative_reduction", cf.relative_reduction}};
    if (format == Format::Json)
        return render_json("counterfactual", cfg.digest(), std::move(body), {});

    std::string text;
    text += "counterfactual: " + b.name + " -> " + i.name + "\n";
    text += "  baseline loss/period      " +
            format_money(cf.baseline.loss_per_period.amount) + "\n";
    text += "  intervention loss/period  " +
            format_money(cf.intervention.loss_per_period.amount) + "\n";
    text += "  absolute delta            " + format_money(cf.absolute_delta.amount) + "\n";
    text += "  relative reduction        " + pct1(cf.relative_reduction) + "\n";
    return text;
}

std::string cmd_allocate(const ConfigDocument& cfg, Format format) {
    if (format == Format::Csv) throw ConfigError("allocate: csv format not supported");
    if (!cfg.budget) throw ConfigError("allocate: config has no budget block");
    const AllocationResult r = allocate_budget(*cfg.budget);

    json body{{"x_f", r.x_f},
              {"x_a", r.x_a},
              {"expected_loss", r.expected_loss.amount},
              {"foc_gap", r.foc_gap},
              {"corner", r.corner}};
    if (format == Format::Json)
        return render_json("allocate", cfg.digest(), std::move(body), {});

    std::string text;
    text += "validation budget allocation\n";
    text += "  x_F            " + num(r.x_f) + "\n";
    text += "  x_A            " + num(r.x_a) + "\n";
    text += "  expected loss  " + format_money(r.expected_loss.amount) + "\n";
    text += "  FOC gap        " + num(r.foc_gap) + "\n";
    text += "  corner         " + std::string(r.corner ? "yes" : "no") + "\n";
    return text;
}

std::string cmd_frontier(const ConfigDocument& cfg, int grid_size,
                         const std::optional<std::string>& out_csv_path, Format format) {
    if (grid_size < 2) throw ConfigError("frontier: grid must be >= 2");
    if (!cfg.costs) throw ConfigError("frontier: config has no costs block");
    const RiskModel& risk = require_risk(cfg, "frontier");

    const auto frontier = efficient_frontier(*cfg.costs, risk, grid_size);
    const OptimalAutomation opt = optimal_automation(*cfg.costs, risk);
    const Money opt_tc = total_cost(*cfg.costs, risk, opt.a_star);

    std::string csv = "a,total_cost,expected_loss\n";
    for (const auto& p : frontier) {
        char row[128];
        std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g\n", p.a, p.total_cost.amount,
                      p.expected_loss.amount);
        csv += row;
    }
    if (out_csv_path) {
        std::ofstream out(*out_csv_path);
        if (!out) throw ConfigError("frontier: cannot write '" + *out_csv_path + "'");
        out << csv;
    }

    if (format == Format::Csv) return csv;

    json points = json::array();
    for (const auto& p : frontier)
        points.push_back(json{{"a", p.a},
                              {"total_cost", p.total_cost.amount},
                              {"expected_loss", p.expected_loss.amount}});
    json body{{"grid_size", grid_size},
              {"frontier_size", frontier.size()},
              {"a_star", opt.a_star},
              {"a_star_total_cost", opt_tc.amount},
              {"a_star_boundary", opt.boundary},
              {"points", std::move(points)}};
    if (format == Format::Json)
        return render_json("frontier", cfg.digest(), std::move(body), {});

    std::string text;
    text += "efficient frontier: " + std::to_string(frontier.size()) + " of " +
            std::to_string(grid_size) + " grid points non-dominated\n";
    text += "  A* = " + num(opt.a_star) + "  (TC " + format_money(opt_tc.amount) +
            (opt.boundary ? ", boundary" : "") + ")\n";
    if (out_csv_path) text += "  frontier written to " + *out_csv_path + "\n";
    return text;
}

std::string cmd_simulate(const ConfigDocument& cfg, std::optional<std::int64_t> n,
                         std::optional<std::uint64_t> seed,
                         const std::optional<std::string>& dump_csv_path, Format format) {
    if (format == Format::Csv) throw ConfigError("simulate: csv format not supported "
                                                 "(use --dump for the record CSV)");
    const RiskModel& risk = require_risk(cfg, "simulate");

    std::optional<double> block_a;
    if (cfg.simulation) {
        if (!n) n = cfg.simulation->n;
        if (!seed) seed = cfg.simulation->seed;
        block_a = cfg.simulation->a;
    }
    if (!n) throw ConfigError("simulate: trial count required (--n or simulation.n)");
    if (*n < 1) throw DomainError("simulate: n must be >= 1");
    if (!seed)
        throw ConfigError("simulate: explicit seed required (--seed or simulation.seed); "
                          "there is no wall-clock default");
    const double a = block_a ? *block_a : effective_a(cfg, std::nullopt, "simulate");
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("simulate: a out of [0,1]");

    const SimResult result = simulate_incidents(SimConfig{risk, a, *n, *seed});
    const SimSummary& s = result.summary;
    const double analytic = expected_loss(risk, a).amount;
    const double band = 3.0 * s.mean_loss_std_error;

    if (dump_csv_path) {
        std::ofstream out(*dump_csv_path);
        if (!out) throw ConfigError("simulate: cannot write '" + *dump_csv_path + "'");
        write_incident_csv(result.dataset, out);
    }

    json body{{"n", s.n},
              {"seed", *seed},
              {"a", a},
              {"analytic_loss_per_decision", analytic},
              {"empirical_mean_loss", s.mean_loss},
              {"mean_loss_std_error", s.mean_loss_std_error},
              {"three_sigma_band", json::array({s.mean_loss - band, s.mean_loss + band})},
              {"within_band", std::abs(s.mean_loss - analytic) <= band},
              {"failures", s.failures},
              {"harms", s.harms},
              {"p_harm_given_failure", s.p_harm_given_failure},
              {"p_exec_given_failure", s.p_exec_given_failure}};
    if (format == Format::Json)
        return render_json("simulate", cfg.digest(), std::move(body), {});

    std::string text;
    text += "monte carlo (n = " + std::to_string(s.n) + ", seed = " +
            std::to_string(*seed) + ", A = " + num(a) + ")\n";
    text += "  analytic loss/decision   " + format_money(analytic) + "\n";
    text += "  empirical mean loss      " + format_money(s.mean_loss) + "  +/- " +
            num(s.mean_loss_std_error) + " (1 s.e.)\n";
    text += "  3-sigma band             [" + num(s.mean_loss - band) + ", " +
            num(s.mean_loss + band) + "]" +
            (std::abs(s.mean_loss - analytic) <= band ? "  contains analytic value"
                                                      : "  EXCLUDES analytic value") +
            "\n";
    text += "  empirical P(H|F)         " + num(s.p_harm_given_failure) + "\n";
    text += "  empirical P(U|F)         " + num(s.p_exec_given_failure) + "\n";
    if (dump_csv_path) text += "  records written to " + *dump_csv_path + "\n";
    return text;
}

std::string cmd_validate(const ConfigDocument& cfg, const std::string& method,
                         std::optional<std::uint64_t> seed,
                         std::optional<double> bandwidth, Format format) {
    if (format == Format::Csv) throw ConfigError("validate: csv format not supported");
    if (!cfg.validation) throw ConfigError("validate: config has no validation block");
    const ValidationBlock& block = *cfg.validation;
    if (!seed) seed = block.seed;
    if (!seed)
        throw ConfigError("validate: explicit seed required (--seed or validation.seed); "
                          "there is no wall-clock default");

    const IncidentDataset ds = generate_observational(block.to_config(*seed));
    std::vector<std::string> warnings;
    if (ds.degenerate_warning)
        warnings.push_back("degenerate: clamping saturated more than 20% of rows");

    EstimateReport report{};
    if (method == "ols") {
        report = estimate_ols(ds, Field::Harmed, {Field::ALevel});
    } else if (method == "iv") {
        report = estimate_iv_2sls(ds);
    } else if (method == "did") {
        report = estimate_did(ds);
    } else if (method == "rd") {
        report = estimate_rd(ds, block.rd_cutoff, bandwidth.value_or(block.rd_bandwidth));
    } else {
        throw ConfigError("validate: unknown method '" + method +
                          "' (expected ols, iv, did or rd)");
    }

    json body{{"method", method},
              {"point", report.point},
              {"std_error", report.std_error},
              {"n_used", report.n_used},
              {"seed", *seed}};
    if (report.first_stage_f) body["first_stage_f"] = *report.first_stage_f;
    if (format == Format::Json)
        return render_json("validate", cfg.digest(), std::move(body), warnings);

    std::string text;
    text += "estimator " + method + " (seed = " + std::to_string(*seed) + ")\n";
    text += "  point      " + num(report.point) + "\n";
    text += "  std error  " + num(report.std_error) + "\n";
    text += "  n used     " + std::to_string(report.n_used) + "\n";
    if (report.first_stage_f)
        text += "  1st-stage F  " + num(*report.first_stage_f) + "\n";
    append_warnings(text, warnings);
    return text;
}

std::string cmd_sensitivity(std::optional<double> evalue_rr,
                            std::optional<std::pair<double, double>> manski_args,
                            Format format) {
    if (format == Format::Csv) throw ConfigError("sensitivity: csv format not supported");
    if (evalue_rr.has_value() == manski_args.has_value())
        throw ConfigError("sensitivity: provide exactly one of --evalue or --manski");

    if (evalue_rr) {
        const double e = e_value(*evalue_rr);
        json inputs{{"command", "sensitivity"}, {"rr", *evalue_rr}};
        json body{{"rr", *evalue_rr}, {"e_value", e}};
        if (format == Format::Json)
            return render_json("sensitivity", fnv1a_hex(inputs.dump()), std::move(body), {});
        return "e-value for risk ratio " + num(*evalue_rr) + ": " + num(e) + "\n";
    }

    const auto [p_hat, rho] = *manski_args;
    const BoundsReport b = manski_bounds(Probability(p_hat), rho);
    json inputs{{"command", "sensitivity"}, {"p_hat", p_hat}, {"rho", rho}};
    json body{{"p_hat", p_hat},
              {"rho", rho},
              {"lower", b.lower.value()},
              {"upper", b.upper.value()}};
    if (format == Format::Json)
        return render_json("sensitivity", fnv1a_hex(inputs.dump()), std::move(body), {});
    return "manski bounds for p_hat = " + num(p_hat) + ", rho = " + num(rho) + ": [" +
           num(b.lower.value()) + ", " + num(b.upper.value()) + "]\n";
}

std::string cmd_power(const PowerOptions& opts, Format format) {
    if (format == Format::Csv) throw ConfigError("power: csv format not supported");
    const PowerResult r = power_analysis(opts.gradient_ratio, opts.n_low, opts.n_total,
                                         opts.alpha, Probability(opts.base_rate_low),
                                         opts.reps, opts.seed);
    json inputs{{"command", "power"},
                {"gradient_ratio", opts.gradient_ratio},
                {"n_low", opts.n_low},
                {"n_total", opts.n_total},
                {"alpha", opts.alpha},
                {"base_rate_low", opts.base_rate_low},
                {"reps", opts.reps},
                {"seed", opts.seed}};
    json body{{"power", r.power},
              {"mc_half_width", r.mc_half_width},
              {"gradient_ratio", opts.gradient_ratio},
              {"n_low", opts.n_low},
              {"n_total", opts.n_total},
              {"alpha", opts.alpha},
              {"base_rate_low", opts.base_rate_low},
              {"reps", r.reps},
              {"seed", opts.seed}};
    if (format == Format::Json)
        return render_json("power", fnv1a_hex(inputs.dump()), std::move(body), {});

    std::string text;
    text += "simulated power (two-proportion z-test)\n";
    text += "  gradient ratio  " + num(opts.gradient_ratio) + "\n";
    text += "  n_low / n_total " + std::to_string(opts.n_low) + " / " +
            std::to_string(opts.n_total) + "\n";
    text += "  power           " + num(r.power) + " +/- " + num(r.mc_half_width) +
            " (95% MC)\n";
    return text;
}

} // namespace autorisk::cli
