// Drives the installed CLI binary end to end: exit-code contract, output
// values and byte-identical reruns. The binary path comes from the build
// system via AUTORISK_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string out; // stdout only; stderr goes to the terminal
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(AUTORISK_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

fs::path write_temp(const std::string& name, const std::string& body) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

const char* kCreditConfig = R"({
  "schema_version": "1",
  "risk": {
    "p_failure": 0.03,
    "harm_curve": {"family": "linear", "points": [[0.1, 0.15], [0.9, 0.85]]},
    "severity_mean": 50000
  },
  "automation": {"a": 0.9},
  "decision_volume": 1000,
  "period": "month",
  "scenarios": [
    {"name": "high-automation", "a": 0.9},
    {"name": "low-automation", "a": 0.1}
  ],
  "simulation": {"n": 200000, "seed": 20260809},
  "validation": {"n": 20000, "true_gradient": 0.8, "confounder_strength": 0.12,
                 "instrument_strength": 0.1, "noise_scale": 0.05, "did_effect": 0.3,
                 "rd_cutoff": 0.0, "rd_jump": 0.25, "seed": 7, "rd_bandwidth": 0.5}
})";

const char* kKnightConfig = R"({
  "schema_version": "1",
  "period": "event",
  "scenarios": [
    {"name": "baseline", "a": 0.9, "decision_volume": 1,
     "risk": {"p_failure": 0.98,
              "harm_curve": {"family": "table",
                             "knots": [[0, 0], [0.3, 0.15], [0.9, 0.9], [1, 1]]},
              "severity_mean": 500000000}},
    {"name": "oversight", "a": 0.3, "decision_volume": 1,
     "risk": {"p_failure": 0.98,
              "harm_curve": {"family": "table",
                             "knots": [[0, 0], [0.3, 0.15], [0.9, 0.9], [1, 1]]},
              "severity_mean": 500000000}},
    {"name": "testing", "a": 0.9, "decision_volume": 1,
     "risk": {"p_failure": 0.1,
              "harm_curve": {"family": "table",
                             "knots": [[0, 0], [0.3, 0.15], [0.9, 0.9], [1, 1]]},
              "severity_mean": 500000000}}
  ]
})";

const char* kCostBudgetConfig = R"({
  "schema_version": "1",
  "risk": {
    "p_failure": 0.03,
    "harm_curve": {"family": "power", "lo": 0, "hi": 0.9, "exponent": 2},
    "severity_mean": 50000
  },
  "automation": {"a": 0.5},
  "costs": {
    "auto": {"family": "quadratic", "c0": 100, "c1": -200, "c2": 100},
    "oversight": {"family": "linear", "c0": 50, "c1": -50}
  },
  "budget": {
    "budget": 10, "cost_f": 1, "cost_a": 1,
    "curve_f": {"family": "hyperbolic", "p0": 0.1, "k": 1},
    "curve_a": {"family": "hyperbolic", "p0": 0.9, "k": 2},
    "severity_mean": 50000
  }
})";

nlohmann::json body_of(const std::string& output) {
    return nlohmann::json::parse(output).at("body");
}

} // namespace

TEST_CASE("decompose prints the worked numbers and honors --a") {
    const auto cfg = write_temp("autorisk_credit.json", kCreditConfig);
    const auto r = run_cli("decompose --config " + cfg.string() + " --format json");
    REQUIRE(r.exit_code == 0);
    const auto body = body_of(r.out);
    CHECK(body.at("loss_per_decision").get<double>() == doctest::Approx(1275.0));
    CHECK(body.at("loss_per_period").get<double>() == doctest::Approx(1275000.0));

    const auto low = run_cli("decompose --config " + cfg.string() + " --a 0.1 --format json");
    REQUIRE(low.exit_code == 0);
    CHECK(body_of(low.out).at("loss_per_decision").get<double>() ==
          doctest::Approx(225.0));
}

TEST_CASE("decompose warns on a zero failure rate") {
    const std::string degenerate = R"({
      "schema_version": "1",
      "risk": {"p_failure": 0,
               "harm_curve": {"family": "power", "lo": 0, "hi": 0.9, "exponent": 2},
               "severity_mean": 1000},
      "automation": {"a": 0.5}
    })";
    const auto cfg = write_temp("autorisk_degenerate.json", degenerate);
    const auto r = run_cli("decompose --config " + cfg.string() + " --format json");
    REQUIRE(r.exit_code == 0);
    const auto env = nlohmann::json::parse(r.out);
    CHECK(env.at("body").at("loss_per_decision").get<double>() == 0.0);
    REQUIRE(env.at("warnings").size() == 1);
    CHECK(env.at("warnings")[0].get<std::string>() == "degenerate: no failure risk");
}

TEST_CASE("exit-code contract: config, domain and estimation failures") {
    const auto malformed = write_temp("autorisk_bad.json",
                                      R"({"schema_version": "1", "risk": {"p_failure": }})");
    CHECK(run_cli("decompose --config " + malformed.string()).exit_code == 2);

    const auto missing = fs::temp_directory_path() / "autorisk_does_not_exist.json";
    CHECK(run_cli("decompose --config " + missing.string()).exit_code == 2);

    // out-of-domain value in an otherwise valid config
    const auto domain = write_temp("autorisk_domain.json", R"({
      "schema_version": "1",
      "risk": {"p_failure": 1.5,
               "harm_curve": {"family": "power", "lo": 0, "hi": 0.9, "exponent": 2},
               "severity_mean": 1000},
      "automation": {"a": 0.5}
    })");
    CHECK(run_cli("decompose --config " + domain.string()).exit_code == 3);

    // weak instrument surfaces as an estimation failure
    const std::string weak = R"({
      "schema_version": "1",
      "validation": {"n": 20000, "true_gradient": 0.8, "confounder_strength": 0.12,
                     "instrument_strength": 0.0, "noise_scale": 0.05, "did_effect": 0,
                     "rd_cutoff": 0.0, "rd_jump": 0.0, "seed": 7}
    })";
    const auto weak_cfg = write_temp("autorisk_weak.json", weak);
    CHECK(run_cli("validate --config " + weak_cfg.string() + " --method iv").exit_code == 4);

    // unknown subcommand and missing required flags are usage errors
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("decompose").exit_code == 2);
}

TEST_CASE("counterfactual renders the Knight reductions to one decimal") {
    const auto cfg = write_temp("autorisk_knight.json", kKnightConfig);
    const auto r = run_cli("counterfactual --config " + cfg.string() +
                           " --baseline baseline --intervention oversight");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("83.3%") != std::string::npos);

    const auto testing = run_cli("counterfactual --config " + cfg.string() +
                                 " --baseline baseline --intervention testing --format json");
    REQUIRE(testing.exit_code == 0);
    const auto body = body_of(testing.out);
    CHECK(body.at("intervention").at("loss_per_period").get<double>() ==
          doctest::Approx(45000000.0));

    const auto self = run_cli("counterfactual --config " + cfg.string() +
                              " --baseline baseline --intervention baseline");
    REQUIRE(self.exit_code == 0);
    CHECK(self.out.find("0.0%") != std::string::npos);

    CHECK(run_cli("counterfactual --config " + cfg.string() +
                  " --baseline baseline --intervention nope").exit_code == 2);
}

TEST_CASE("allocate solves the worked budget problem") {
    const auto cfg = write_temp("autorisk_cost.json", kCostBudgetConfig);
    const auto r = run_cli("allocate --config " + cfg.string() + " --format json");
    REQUIRE(r.exit_code == 0);
    const auto body = body_of(r.out);
    CHECK(body.at("x_f").get<double>() == doctest::Approx(4.75).epsilon(1e-4));
    CHECK(body.at("x_a").get<double>() == doctest::Approx(5.25).epsilon(1e-4));
    CHECK_FALSE(body.at("corner").get<bool>());
}

TEST_CASE("frontier emits csv and the optimal summary") {
    const auto cfg = write_temp("autorisk_cost2.json", kCostBudgetConfig);
    const auto out_path = fs::temp_directory_path() / "autorisk_frontier.csv";
    const auto r = run_cli("frontier --config " + cfg.string() + " --grid 1001 --out " +
                           out_path.string() + " --format json");
    REQUIRE(r.exit_code == 0);
    const auto body = body_of(r.out);
    CHECK(body.at("a_star").get<double>() == doctest::Approx(0.0862069).epsilon(1e-3));

    std::ifstream csv(out_path);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "a,total_cost,expected_loss");

    CHECK(run_cli("frontier --config " + cfg.string() + " --grid 1").exit_code == 2);
}

TEST_CASE("frontier exits 3 when A* is undefined for the curve family") {
    const std::string threshold_cfg = R"({
      "schema_version": "1",
      "risk": {"p_failure": 0.1,
               "harm_curve": {"family": "threshold", "step_at": 0.5, "low": 0.1, "high": 0.9},
               "severity_mean": 1000},
      "costs": {
        "auto": {"family": "linear", "c0": 100, "c1": -100},
        "oversight": {"family": "linear", "c0": 50, "c1": -50}
      }
    })";
    const auto cfg = write_temp("autorisk_threshold.json", threshold_cfg);
    CHECK(run_cli("frontier --config " + cfg.string() + " --grid 101").exit_code == 3);
}

TEST_CASE("decompose csv and simulate --dump produce machine-readable output") {
    const auto cfg = write_temp("autorisk_credit5.json", kCreditConfig);
    const auto csv = run_cli("decompose --config " + cfg.string() + " --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("p_failure,", 0) == 0);

    const auto dump_path = fs::temp_directory_path() / "autorisk_records.csv";
    const auto sim = run_cli("simulate --config " + cfg.string() +
                             " --n 500 --seed 3 --dump " + dump_path.string());
    REQUIRE(sim.exit_code == 0);
    std::ifstream records(dump_path);
    std::string header;
    std::getline(records, header);
    CHECK(header ==
          "failed,executed,harmed,loss,a_level,covariate,instrument,group,time,running_var");
}

TEST_CASE("simulate requires a seed and stays inside its own band") {
    const auto cfg = write_temp("autorisk_credit2.json", kCreditConfig);
    const auto r = run_cli("simulate --config " + cfg.string() + " --format json");
    REQUIRE(r.exit_code == 0);
    const auto body = body_of(r.out);
    CHECK(body.at("within_band").get<bool>());
    CHECK(body.at("p_harm_given_failure").get<double>() ==
          body.at("p_exec_given_failure").get<double>());

    // no seed anywhere -> usage error
    const std::string seedless = R"({
      "schema_version": "1",
      "risk": {"p_failure": 0.03,
               "harm_curve": {"family": "power", "lo": 0, "hi": 0.9, "exponent": 2},
               "severity_mean": 1000},
      "automation": {"a": 0.5}
    })";
    const auto cfg2 = write_temp("autorisk_seedless.json", seedless);
    CHECK(run_cli("simulate --config " + cfg2.string() + " --n 100").exit_code == 2);
}

TEST_CASE("seeded commands are byte-identical across reruns") {
    const auto credit = write_temp("autorisk_credit3.json", kCreditConfig);
    const std::string base = std::string("--config ") + credit.string() + " --format json";
    const std::vector<std::string> commands = {
        "simulate " + base,
        "validate " + base + " --method ols",
        "validate " + base + " --method iv",
        "validate " + base + " --method did",
        "validate " + base + " --method rd",
        "power --seed 42 --format json",
        "sensitivity --evalue 4 --format json",
        "decompose " + base,
    };
    for (const auto& cmd : commands) {
        CAPTURE(cmd);
        const auto first = run_cli(cmd);
        const auto second = run_cli(cmd);
        REQUIRE(first.exit_code == 0);
        CHECK(first.out == second.out);
        CHECK_FALSE(first.out.empty());
    }
}

TEST_CASE("validate surfaces estimates with their diagnostics") {
    const auto cfg = write_temp("autorisk_credit4.json", kCreditConfig);
    const auto iv = run_cli("validate --config " + cfg.string() + " --method iv --format json");
    REQUIRE(iv.exit_code == 0);
    const auto body = body_of(iv.out);
    CHECK(body.at("first_stage_f").get<double>() > 10.0);
    CHECK(body.at("point").get<double>() == doctest::Approx(0.8).epsilon(0.25));

    CHECK(run_cli("validate --config " + cfg.string() + " --method nope").exit_code == 2);
}

TEST_CASE("sensitivity and power flag validation") {
    const auto ev = run_cli("sensitivity --evalue 4 --format json");
    REQUIRE(ev.exit_code == 0);
    CHECK(body_of(ev.out).at("e_value").get<double>() == doctest::Approx(7.4641).epsilon(1e-4));
    CHECK(run_cli("sensitivity --evalue 1").out.find("1") != std::string::npos);

    const auto manski = run_cli("sensitivity --manski 0.2 0.25 --format json");
    REQUIRE(manski.exit_code == 0);
    CHECK(body_of(manski.out).at("lower").get<double>() == doctest::Approx(0.15));
    CHECK(body_of(manski.out).at("upper").get<double>() == doctest::Approx(0.40));

    CHECK(run_cli("sensitivity --evalue 0.5").exit_code == 3);     // inversion hint
    CHECK(run_cli("sensitivity --manski 0.2 1.0").exit_code == 3); // unidentified
    CHECK(run_cli("sensitivity").exit_code == 2);                  // no mode flag
    CHECK(run_cli("sensitivity --evalue 4 --manski 0.2 0.1").exit_code == 2);

    CHECK(run_cli("power --seed 1 --reps 50").exit_code == 2);
    CHECK(run_cli("power --reps 500").exit_code == 2); // seed is mandatory
    CHECK(run_cli("power --seed 1 --reps 200 --gradient 20").exit_code == 3);
}
