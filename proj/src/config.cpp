#include "autorisk/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "autorisk/errors.hpp"

namespace autorisk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) fail(path + "." + it.key(), "unknown field");
    }
}

const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double require_number(const json& j, const char* key, const std::string& path) {
    return as_number(require(j, key, path), path + "." + key);
}

std::int64_t require_integer(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t require_seed(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        fail(path + "." + key, "expected a non-negative integer seed");
    return v.get<std::uint64_t>();
}

std::string require_string(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<std::pair<double, double>> parse_knots(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of [x, y] pairs");
    std::vector<std::pair<double, double>> knots;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& k = j[i];
        const std::string kp = path + "[" + std::to_string(i) + "]";
        if (!k.is_array() || k.size() != 2) fail(kp, "expected an [x, y] pair");
        knots.emplace_back(as_number(k[0], kp + "[0]"), as_number(k[1], kp + "[1]"));
    }
    return knots;
}

HarmCurve parse_harm_curve(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string family = require_string(j, "family", path);
    if (family == "linear") {
        reject_unknown_keys(j, path, {"family", "points"});
        auto pts = parse_knots(require(j, "points", path), path + ".points");
        if (pts.size() != 2) fail(path + ".points", "linear curve needs exactly two points");
        return HarmCurve::linear_through(pts[0].first, pts[0].second,
                                         pts[1].first, pts[1].second);
    }
    if (family == "logistic") {
        reject_unknown_keys(j, path, {"family", "midpoint", "steepness", "lo", "hi"});
        return HarmCurve::logistic(require_number(j, "midpoint", path),
                                   require_number(j, "steepness", path),
                                   require_number(j, "lo", path),
                                   require_number(j, "hi", path));
    }
    if (family == "threshold") {
        reject_unknown_keys(j, path, {"family", "step_at", "low", "high"});
        return HarmCurve::threshold(require_number(j, "step_at", path),
                                    require_number(j, "low", path),
                                    require_number(j, "high", path));
    }
    if (family == "table") {
        reject_unknown_keys(j, path, {"family", "knots"});
        return HarmCurve::table(parse_knots(require(j, "knots", path), path + ".knots"));
    }
    if (family == "power") {
        reject_unknown_keys(j, path, {"family", "lo", "hi", "exponent"});
        return HarmCurve::power(require_number(j, "lo", path),
                                require_number(j, "hi", path),
                                require_number(j, "exponent", path));
    }
    fail(path + ".family", "unknown harm curve family '" + family + "'");
}

CostCurve parse_cost_curve(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string family = require_string(j, "family", path);
    // Config-loaded cost curves are always the nonincreasing curves of the
    // total-cost model.
    const auto sense = MonotoneSense::Nonincreasing;
    if (family == "linear") {
        reject_unknown_keys(j, path, {"family", "c0", "c1"});
        return CostCurve::linear(require_number(j, "c0", path),
                                 require_number(j, "c1", path), sense);
    }
    if (family == "quadratic") {
        reject_unknown_keys(j, path, {"family", "c0", "c1", "c2"});
        return CostCurve::quadratic(require_number(j, "c0", path),
                                    require_number(j, "c1", path),
                                    require_number(j, "c2", path), sense);
    }
    if (family == "exponential") {
        reject_unknown_keys(j, path, {"family", "scale", "rate", "offset"});
        return CostCurve::exponential(require_number(j, "scale", path),
                                      require_number(j, "rate", path),
                                      require_number(j, "offset", path), sense);
    }
    if (family == "table") {
        reject_unknown_keys(j, path, {"family", "knots"});
        return CostCurve::table(parse_knots(require(j, "knots", path), path + ".knots"),
                                sense);
    }
    fail(path + ".family", "unknown cost curve family '" + family + "'");
}

ReturnCurve parse_return_curve(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string family = require_string(j, "family", path);
    if (family == "hyperbolic") {
        reject_unknown_keys(j, path, {"family", "p0", "k"});
        return ReturnCurve::hyperbolic(require_number(j, "p0", path),
                                       require_number(j, "k", path));
    }
    if (family == "exponential_floor") {
        reject_unknown_keys(j, path, {"family", "p0", "k", "floor"});
        return ReturnCurve::exponential_floor(require_number(j, "p0", path),
                                              require_number(j, "k", path),
                                              require_number(j, "floor", path));
    }
    fail(path + ".family", "unknown return curve family '" + family + "'");
}

SeverityDistribution parse_severity_distribution(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string family = require_string(j, "family", path);
    if (family == "point") {
        reject_unknown_keys(j, path, {"family", "value"});
        return SeverityDistribution::point(Money{require_number(j, "value", path)});
    }
    if (family == "lognormal") {
        reject_unknown_keys(j, path, {"family", "mu", "sigma"});
        return SeverityDistribution::lognormal(require_number(j, "mu", path),
                                               require_number(j, "sigma", path));
    }
    fail(path + ".family", "unknown severity distribution family '" + family + "'");
}

RiskModel parse_risk(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown_keys(j, path,
                        {"p_failure", "harm_curve", "severity_mean", "severity_distribution"});
    std::optional<SeverityDistribution> dist;
    if (j.contains("severity_distribution"))
        dist = parse_severity_distribution(j["severity_distribution"],
                                           path + ".severity_distribution");
    return RiskModel(Probability(require_number(j, "p_failure", path)),
                     parse_harm_curve(require(j, "harm_curve", path), path + ".harm_curve"),
                     Money{require_number(j, "severity_mean", path)}, std::move(dist));
}

AutomationSpec parse_automation(const json& j, const std::string& path) {
    expect_object(j, path);
    if (j.contains("a")) {
        reject_unknown_keys(j, path, {"a"});
        return AutomationSpec::scalar(as_number(j["a"], path + ".a"));
    }
    reject_unknown_keys(j, path, {"profile", "rule"});
    const json& p = require(j, "profile", path);
    expect_object(p, path + ".profile");
    reject_unknown_keys(p, path + ".profile", {"decision", "override", "detection"});
    AutomationProfile profile(require_number(p, "decision", path + ".profile"),
                              require_number(p, "override", path + ".profile"),
                              require_number(p, "detection", path + ".profile"));
    const std::string rule = require_string(j, "rule", path);
    AggregationRule r;
    if (rule == "max") r = AggregationRule::Max;
    else if (rule == "mean") r = AggregationRule::Mean;
    else if (rule == "product") r = AggregationRule::Product;
    else fail(path + ".rule", "unknown aggregation rule '" + rule + "'");
    return AutomationSpec::profile(profile, r);
}

json knots_to_json(const std::vector<std::pair<double, double>>& knots) {
    json arr = json::array();
    for (const auto& [x, y] : knots) arr.push_back(json::array({x, y}));
    return arr;
}

json severity_distribution_to_json(const SeverityDistribution& d) {
    if (d.is_point())
        return json{{"family", "point"},
                    {"value", d.params<SeverityDistribution::PointParams>().value}};
    const auto& p = d.params<SeverityDistribution::LognormalParams>();
    return json{{"family", "lognormal"}, {"mu", p.mu}, {"sigma", p.sigma}};
}

json risk_to_json(const RiskModel& r) {
    json j{{"p_failure", r.p_failure().value()},
           {"harm_curve", harm_curve_to_json(r.harm_curve())},
           {"severity_mean", r.severity_mean().amount}};
    if (r.has_explicit_distribution())
        j["severity_distribution"] = severity_distribution_to_json(r.severity_distribution());
    return j;
}

json automation_to_json(const AutomationSpec& a) {
    if (a.is_scalar()) return json{{"a", a.scalar_value()}};
    const auto& [profile, rule] = a.profile_value();
    const char* rule_name = rule == AggregationRule::Max    ? "max"
                            : rule == AggregationRule::Mean ? "mean"
                                                            : "product";
    return json{{"profile",
                 {{"decision", profile.a_decision},
                  {"override", profile.a_override},
                  {"detection", profile.a_detection}}},
                {"rule", rule_name}};
}

} // namespace

json harm_curve_to_json(const HarmCurve& c) {
    switch (c.family()) {
    case HarmFamily::Linear: {
        const auto& p = c.params<HarmCurve::LinearParams>();
        return json{{"family", "linear"},
                    {"points", json::array({json::array({p.a0, p.p0}),
                                            json::array({p.a1, p.p1})})}};
    }
    case HarmFamily::Logistic: {
        const auto& p = c.params<HarmCurve::LogisticParams>();
        return json{{"family", "logistic"}, {"midpoint", p.midpoint},
                    {"steepness", p.steepness}, {"lo", p.lo}, {"hi", p.hi}};
    }
    case HarmFamily::Threshold: {
        const auto& p = c.params<HarmCurve::ThresholdParams>();
        return json{{"family", "threshold"}, {"step_at", p.step_at},
                    {"low", p.low}, {"high", p.high}};
    }
    case HarmFamily::Table:
        return json{{"family", "table"},
                    {"knots", knots_to_json(c.params<HarmCurve::TableParams>().knots)}};
    case HarmFamily::Power: {
        const auto& p = c.params<HarmCurve::PowerParams>();
        return json{{"family", "power"}, {"lo", p.lo}, {"hi", p.hi},
                    {"exponent", p.exponent}};
    }
    }
    throw DomainError("unknown harm curve family");
}

json cost_curve_to_json(const CostCurve& c) {
    switch (c.family()) {
    case CostFamily::Linear: {
        const auto& p = c.params<CostCurve::LinearParams>();
        return json{{"family", "linear"}, {"c0", p.c0}, {"c1", p.c1}};
    }
    case CostFamily::Quadratic: {
        const auto& p = c.params<CostCurve::QuadraticParams>();
        return json{{"family", "quadratic"}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}};
    }
    case CostFamily::Exponential: {
        const auto& p = c.params<CostCurve::ExponentialParams>();
        return json{{"family", "exponential"}, {"scale", p.scale}, {"rate", p.rate},
                    {"offset", p.offset}};
    }
    case CostFamily::Table:
        return json{{"family", "table"},
                    {"knots", knots_to_json(c.params<CostCurve::TableParams>().knots)}};
    }
    throw DomainError("unknown cost curve family");
}

json return_curve_to_json(const ReturnCurve& c) {
    if (c.is_hyperbolic()) {
        const auto& p = c.params<ReturnCurve::HyperbolicParams>();
        return json{{"family", "hyperbolic"}, {"p0", p.p0}, {"k", p.k}};
    }
    const auto& p = c.params<ReturnCurve::ExponentialFloorParams>();
    return json{{"family", "exponential_floor"}, {"p0", p.p0}, {"k", p.k},
                {"floor", p.floor}};
}

ConfigDocument ConfigDocument::parse(const json& j) {
    expect_object(j, "config");
    reject_unknown_keys(j, "config",
                        {"schema_version", "risk", "automation", "decision_volume",
                         "period", "costs", "budget", "scenarios", "simulation",
                         "validation"});

    ConfigDocument doc;
    doc.schema_version = require_string(j, "schema_version", "config");
    if (doc.schema_version != "1")
        fail("config.schema_version",
             "unrecognized version '" + doc.schema_version + "' (expected \"1\")");

    if (j.contains("risk")) doc.risk = parse_risk(j["risk"], "risk");
    if (j.contains("automation"))
        doc.automation = parse_automation(j["automation"], "automation");
    if (j.contains("decision_volume")) {
        doc.decision_volume = require_integer(j, "decision_volume", "config");
        if (*doc.decision_volume < 0) fail("config.decision_volume", "must be >= 0");
    }
    if (j.contains("period")) doc.period_label = require_string(j, "period", "config");

    if (j.contains("costs")) {
        const json& c = j["costs"];
        expect_object(c, "costs");
        reject_unknown_keys(c, "costs", {"auto", "oversight"});
        doc.costs = CostModel(parse_cost_curve(require(c, "auto", "costs"), "costs.auto"),
                              parse_cost_curve(require(c, "oversight", "costs"),
                                               "costs.oversight"));
    }

    if (j.contains("budget")) {
        const json& b = j["budget"];
        expect_object(b, "budget");
        reject_unknown_keys(b, "budget",
                            {"budget", "cost_f", "cost_a", "curve_f", "curve_a",
                             "severity_mean"});
        doc.budget = BudgetProblem(
            Money{require_number(b, "budget", "budget")},
            Money{require_number(b, "cost_f", "budget")},
            Money{require_number(b, "cost_a", "budget")},
            parse_return_curve(require(b, "curve_f", "budget"), "budget.curve_f"),
            parse_return_curve(require(b, "curve_a", "budget"), "budget.curve_a"),
            Money{require_number(b, "severity_mean", "budget")});
    }

    if (j.contains("scenarios")) {
        const json& arr = j["scenarios"];
        if (!arr.is_array()) fail("scenarios", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& s = arr[i];
            const std::string path = "scenarios[" + std::to_string(i) + "]";
            expect_object(s, path);
            reject_unknown_keys(s, path,
                                {"name", "risk", "a", "profile", "rule",
                                 "decision_volume", "period"});
            const std::string name = require_string(s, "name", path);

            std::optional<RiskModel> risk;
            if (s.contains("risk")) risk = parse_risk(s["risk"], path + ".risk");
            else if (doc.risk) risk = doc.risk;
            else fail(path + ".risk", "missing and no top-level risk block to inherit");

            std::optional<AutomationSpec> automation;
            if (s.contains("a") || s.contains("profile")) {
                json a_block = s;
                a_block.erase("name");
                a_block.erase("risk");
                a_block.erase("decision_volume");
                a_block.erase("period");
                automation = parse_automation(a_block, path);
            } else if (doc.automation) {
                automation = doc.automation;
            } else {
                fail(path, "missing automation ('a' or 'profile') and no top-level "
                           "automation block to inherit");
            }

            std::int64_t volume = doc.decision_volume.value_or(0);
            if (s.contains("decision_volume")) {
                volume = require_integer(s, "decision_volume", path);
                if (volume < 0) fail(path + ".decision_volume", "must be >= 0");
            }
            std::string period = doc.period_label.value_or("");
            if (s.contains("period")) period = require_string(s, "period", path);

            doc.scenarios.emplace_back(name, *std::move(risk), *automation, volume,
                                       std::move(period));
        }
    }

    if (j.contains("simulation")) {
        const json& s = j["simulation"];
        expect_object(s, "simulation");
        reject_unknown_keys(s, "simulation", {"n", "seed", "a"});
        SimulationBlock block;
        if (s.contains("n")) {
            block.n = require_integer(s, "n", "simulation");
            if (*block.n < 1) fail("simulation.n", "must be >= 1");
        }
        if (s.contains("seed")) block.seed = require_seed(s, "seed", "simulation");
        if (s.contains("a")) block.a = as_number(s["a"], "simulation.a");
        doc.simulation = block;
    }

    if (j.contains("validation")) {
        const json& v = j["validation"];
        expect_object(v, "validation");
        reject_unknown_keys(v, "validation",
                            {"n", "true_gradient", "confounder_strength",
                             "instrument_strength", "noise_scale", "did_effect",
                             "rd_cutoff", "rd_jump", "seed", "rd_bandwidth"});
        ValidationBlock block;
        block.n = require_integer(v, "n", "validation");
        block.true_gradient = require_number(v, "true_gradient", "validation");
        block.confounder_strength = require_number(v, "confounder_strength", "validation");
        block.instrument_strength = require_number(v, "instrument_strength", "validation");
        block.noise_scale = require_number(v, "noise_scale", "validation");
        block.did_effect = require_number(v, "did_effect", "validation");
        block.rd_cutoff = require_number(v, "rd_cutoff", "validation");
        block.rd_jump = require_number(v, "rd_jump", "validation");
        if (v.contains("seed")) block.seed = require_seed(v, "seed", "validation");
        if (v.contains("rd_bandwidth")) {
            block.rd_bandwidth = as_number(v["rd_bandwidth"], "validation.rd_bandwidth");
            if (!(block.rd_bandwidth > 0.0)) fail("validation.rd_bandwidth", "must be > 0");
        }
        doc.validation = block;
    }

    return doc;
}

ConfigDocument ConfigDocument::parse_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse(j);
}

ConfigDocument ConfigDocument::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

json ConfigDocument::to_json() const {
    json j{{"schema_version", schema_version}};
    if (risk) j["risk"] = risk_to_json(*risk);
    if (automation) j["automation"] = automation_to_json(*automation);
    if (decision_volume) j["decision_volume"] = *decision_volume;
    if (period_label) j["period"] = *period_label;
    if (costs)
        j["costs"] = json{{"auto", cost_curve_to_json(costs->c_auto)},
                          {"oversight", cost_curve_to_json(costs->c_oversight)}};
    if (budget)
        j["budget"] = json{{"budget", budget->budget.amount},
                           {"cost_f", budget->cost_f.amount},
                           {"cost_a", budget->cost_a.amount},
                           {"curve_f", return_curve_to_json(budget->curve_f)},
                           {"curve_a", return_curve_to_json(budget->curve_a)},
                           {"severity_mean", budget->severity_mean.amount}};
    if (!scenarios.empty()) {
        json arr = json::array();
        for (const auto& s : scenarios) {
            json e{{"name", s.name},
                   {"risk", risk_to_json(s.risk)},
                   {"decision_volume", s.decision_volume},
                   {"period", s.period_label}};
            e.update(automation_to_json(s.automation));
            arr.push_back(std::move(e));
        }
        j["scenarios"] = std::move(arr);
    }
    if (simulation) {
        json s = json::object();
        if (simulation->n) s["n"] = *simulation->n;
        if (simulation->seed) s["seed"] = *simulation->seed;
        if (simulation->a) s["a"] = *simulation->a;
        j["simulation"] = std::move(s);
    }
    if (validation) {
        json v{{"n", validation->n},
               {"true_gradient", validation->true_gradient},
               {"confounder_strength", validation->confounder_strength},
               {"instrument_strength", validation->instrument_strength},
               {"noise_scale", validation->noise_scale},
               {"did_effect", validation->did_effect},
               {"rd_cutoff", validation->rd_cutoff},
               {"rd_jump", validation->rd_jump},
               {"rd_bandwidth", validation->rd_bandwidth}};
        if (validation->seed) v["seed"] = *validation->seed;
        j["validation"] = std::move(v);
    }
    return j;
}

std::string ConfigDocument::digest() const {
    const std::string dump = to_json().dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

const Scenario& ConfigDocument::find_scenario(const std::string& name) const {
    for (const auto& s : scenarios)
        if (s.name == name) return s;
    throw ConfigError("unknown scenario '" + name + "'");
}

} // namespace autorisk
