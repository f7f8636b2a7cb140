#include <doctest.h>

#include <cmath>
#include <vector>

#include "autorisk/policy.hpp"
#include "autorisk/rng.hpp"
#include "oracles.hpp"

using namespace autorisk;

namespace {

// Worked cost example: c_auto = 100(1-A)^2, c_oversight = 50(1-A), risk term
// 1350*A^2 from P(F)=0.03, harm curve 0.9*A^2, S = $50k. Analytic optimum of
// dTC/dA = -200(1-A) - 50 + 2700A at A = 250/2900.
CostModel worked_costs() {
    return CostModel(CostCurve::quadratic(100, -200, 100, MonotoneSense::Nonincreasing),
                     CostCurve::linear(50, -50, MonotoneSense::Nonincreasing));
}

RiskModel worked_risk() {
    return RiskModel(Probability(0.03), HarmCurve::power(0.0, 0.9, 2.0), Money{50000});
}

constexpr double kWorkedAStar = 250.0 / 2900.0;

struct RandomConvexConfig {
    CostModel costs;
    RiskModel risk;
};

// Convex-family configurations with headroom for the comparative-statics
// doublings (p_failure <= 0.5, harm span <= 0.45).
RandomConvexConfig random_convex_config(SplitRng& rng) {
    auto cost_curve = [&]() {
        switch (rng.next_u64() % 3) {
        case 0: {
            const double c1 = rng.uniform(-80.0, 0.0);
            return CostCurve::linear(rng.uniform(-c1, -c1 + 100.0), c1,
                                     MonotoneSense::Nonincreasing);
        }
        case 1: {
            // c0 (1-A)^2 form keeps the curve nonincreasing and convex
            const double c0 = rng.uniform(0.5, 150.0);
            return CostCurve::quadratic(c0, -2.0 * c0, c0, MonotoneSense::Nonincreasing);
        }
        default:
            return CostCurve::exponential(rng.uniform(1.0, 100.0),
                                          rng.uniform(-3.0, -0.5), rng.uniform(0.0, 10.0),
                                          MonotoneSense::Nonincreasing);
        }
    };
    auto harm_curve = [&]() {
        if (rng.next_u64() % 2 == 0) {
            const double lo = rng.uniform(0.0, 0.1);
            return HarmCurve::power(lo, lo + rng.uniform(0.1, 0.35),
                                    rng.uniform(1.0, 3.0));
        }
        const double p0 = rng.uniform(0.0, 0.1);
        return HarmCurve::linear_through(0.0, p0, 1.0, p0 + rng.uniform(0.1, 0.35));
    };
    return RandomConvexConfig{
        CostModel(cost_curve(), cost_curve()),
        RiskModel(Probability(rng.uniform(0.02, 0.5)), harm_curve(),
                  Money{rng.uniform(500.0, 5e4)})};
}

} // namespace

TEST_CASE("total_cost worked example and reductions") {
    const CostModel costs = worked_costs();
    const RiskModel risk = worked_risk();
    CHECK(total_cost(costs, risk, 0.0).amount == doctest::Approx(150.0).epsilon(1e-12));
    CHECK(total_cost(costs, risk, 1.0).amount == doctest::Approx(1350.0).epsilon(1e-12));

    // zero-cost curves: total cost collapses to expected loss
    const CostModel zero(CostCurve::linear(0, 0, MonotoneSense::Nonincreasing),
                         CostCurve::linear(0, 0, MonotoneSense::Nonincreasing));
    for (double a : {0.1, 0.5, 0.9})
        CHECK(total_cost(zero, risk, a).amount == expected_loss(risk, a).amount);

    // zero-risk model: total cost collapses to the cost curves
    const RiskModel no_risk(Probability(0.0), HarmCurve::power(0.0, 0.9, 2.0),
                            Money{50000});
    for (double a : {0.1, 0.5, 0.9})
        CHECK(total_cost(costs, no_risk, a).amount ==
              doctest::Approx(100 * (1 - a) * (1 - a) + 50 * (1 - a)).epsilon(1e-12));

    CHECK_THROWS_AS(total_cost(costs, risk, 1.5), DomainError);
}

TEST_CASE("cost curve validation") {
    // declared nonincreasing but rising
    CHECK_THROWS_AS(CostCurve::linear(10, 5, MonotoneSense::Nonincreasing), DomainError);
    // negative values
    CHECK_THROWS_AS(CostCurve::linear(10, -20, MonotoneSense::Nonincreasing), DomainError);
    CHECK_THROWS_AS(CostCurve::exponential(-5, 1, 0, MonotoneSense::Nonincreasing),
                    DomainError);
    CHECK_NOTHROW(CostCurve::table({{0.0, 10.0}, {1.0, 2.0}}, MonotoneSense::Nonincreasing));
    // CostModel rejects a nondecreasing oversight curve
    CHECK_THROWS_AS(CostModel(CostCurve::linear(10, -5, MonotoneSense::Nonincreasing),
                              CostCurve::linear(1, 5, MonotoneSense::Nondecreasing)),
                    DomainError);
}

TEST_CASE("optimal_automation worked example") {
    const auto result = optimal_automation(worked_costs(), worked_risk());
    CHECK(result.a_star == doctest::Approx(kWorkedAStar).epsilon(1e-6));
    CHECK_FALSE(result.boundary);
    CHECK(result.second_order_ok);
    CHECK(std::abs(result.foc_residual) <= 1e-8);

    // exhaustive grid oracle at step 1e-4
    const auto tc = [&](double a) {
        return total_cost(worked_costs(), worked_risk(), a).amount;
    };
    const double oracle_a = oracle::grid_argmin(tc, 0.0, 1.0, 10000);
    CHECK(std::abs(result.a_star - oracle_a) < 1e-3);
}

TEST_CASE("optimal_automation degenerate flat objective") {
    const CostModel flat_costs(CostCurve::linear(10, 0, MonotoneSense::Nonincreasing),
                               CostCurve::linear(5, 0, MonotoneSense::Nonincreasing));
    const RiskModel flat_risk(Probability(0.2), HarmCurve::table({{0.0, 0.4}, {1.0, 0.4}}),
                              Money{100});
    const auto result = optimal_automation(flat_costs, flat_risk);
    CHECK(result.a_star == 0.0);
    CHECK(result.boundary);
    CHECK(result.second_order_ok);
}

TEST_CASE("optimal_automation rejects nondifferentiable curves") {
    const RiskModel step(Probability(0.1), HarmCurve::threshold(0.5, 0.1, 0.9), Money{1000});
    CHECK_THROWS_AS(optimal_automation(worked_costs(), step), UnsupportedCurveError);

    const RiskModel kinked(Probability(0.1),
                           HarmCurve::table({{0.0, 0.0}, {0.5, 0.2}, {1.0, 0.9}}),
                           Money{1000});
    CHECK_THROWS_AS(optimal_automation(worked_costs(), kinked), UnsupportedCurveError);

    const CostModel kinked_costs(
        CostCurve::table({{0.0, 100.0}, {0.4, 40.0}, {1.0, 0.0}},
                         MonotoneSense::Nonincreasing),
        CostCurve::linear(50, -50, MonotoneSense::Nonincreasing));
    CHECK_THROWS_AS(optimal_automation(kinked_costs, worked_risk()), UnsupportedCurveError);

    // a two-knot table is a plain line and stays supported
    const CostModel endpoint_costs(
        CostCurve::table({{0.0, 100.0}, {1.0, 0.0}}, MonotoneSense::Nonincreasing),
        CostCurve::linear(50, -50, MonotoneSense::Nonincreasing));
    CHECK_NOTHROW(optimal_automation(endpoint_costs, worked_risk()));
}

TEST_CASE("optimal_automation global grid check on random convex configs") {
    SplitRng rng(8001);
    for (int i = 0; i < 20; ++i) {
        const auto cfg = random_convex_config(rng);
        const auto result = optimal_automation(cfg.costs, cfg.risk);
        const auto tc = [&](double a) { return total_cost(cfg.costs, cfg.risk, a).amount; };
        const double grid_min = oracle::grid_min_value(tc, 0.0, 1.0, 10000);
        CHECK(tc(result.a_star) <= grid_min + 1e-6 * std::max(1.0, std::abs(grid_min)));
        if (!result.boundary) CHECK(std::abs(result.foc_residual) <= 1e-8);
        CHECK(result.second_order_ok);
    }
}

TEST_CASE("convexity: numeric second derivative of TC is nonnegative") {
    SplitRng rng(8002);
    for (int i = 0; i < 10; ++i) {
        const auto cfg = random_convex_config(rng);
        REQUIRE(cfg.risk.harm_curve().convex_family());
        REQUIRE(cfg.costs.c_auto.convex_family());
        for (int j = 0; j < 100; ++j) {
            const double a = rng.uniform(0.01, 0.99);
            const double h = 1e-5;
            const double lo = std::max(a - h, 1e-9);
            const double hi = std::min(a + h, 1.0 - 1e-9);
            const double second = (total_cost_derivative(cfg.costs, cfg.risk, hi) -
                                   total_cost_derivative(cfg.costs, cfg.risk, lo)) /
                                  (hi - lo);
            CHECK(second >= -1e-9);
        }
    }
}

TEST_CASE("allocate_budget worked hyperbolic problem") {
    const BudgetProblem problem(Money{10}, Money{1}, Money{1},
                                ReturnCurve::hyperbolic(0.1, 1.0),
                                ReturnCurve::hyperbolic(0.9, 2.0), Money{50000});
    const auto result = allocate_budget(problem);

    const auto closed = oracle::hyperbolic_allocation(10, 1, 1, 1, 2);
    CHECK(closed.x_f == doctest::Approx(4.75).epsilon(1e-12));
    CHECK(closed.x_a == doctest::Approx(5.25).epsilon(1e-12));
    CHECK(std::abs(result.x_f - closed.x_f) < 1e-4);
    CHECK(std::abs(result.x_a - closed.x_a) < 1e-4);
    CHECK_FALSE(result.corner);
    CHECK(std::abs(result.foc_gap) <= 1e-8);

    // exhaustive budget-line oracle
    const auto objective = [&](double xf) {
        return problem.curve_f.value(xf) * problem.curve_a.value((10.0 - xf) / 1.0) *
               50000.0;
    };
    const double grid_best = oracle::grid_min_value(objective, 0.0, 10.0, 10000);
    CHECK(result.expected_loss.amount <=
          grid_best + 1e-6 * std::max(1.0, std::abs(grid_best)));
}

TEST_CASE("allocate_budget symmetric and zero-budget cases") {
    const BudgetProblem symmetric(Money{8}, Money{2}, Money{2},
                                  ReturnCurve::hyperbolic(0.4, 1.5),
                                  ReturnCurve::hyperbolic(0.4, 1.5), Money{1000});
    const auto sym = allocate_budget(symmetric);
    CHECK(sym.x_f == doctest::Approx(sym.x_a).epsilon(1e-8));
    CHECK(sym.x_f == doctest::Approx(8.0 / (2.0 * 2.0)).epsilon(1e-6));

    const BudgetProblem empty(Money{0}, Money{1}, Money{1},
                              ReturnCurve::hyperbolic(0.1, 1.0),
                              ReturnCurve::hyperbolic(0.9, 2.0), Money{50000});
    const auto zero = allocate_budget(empty);
    CHECK(zero.x_f == 0.0);
    CHECK(zero.x_a == 0.0);
    CHECK(zero.corner);
    CHECK(zero.expected_loss.amount == doctest::Approx(0.1 * 0.9 * 50000).epsilon(1e-12));
}

TEST_CASE("allocate_budget properties on random problems") {
    SplitRng rng(8003);
    for (int i = 0; i < 40; ++i) {
        const double B = rng.uniform(0.0, 50.0);
        const double cf = rng.uniform(0.5, 5.0);
        const double ca = rng.uniform(0.5, 5.0);
        const bool expo = rng.next_u64() % 2 == 0;
        ReturnCurve f = expo ? ReturnCurve::exponential_floor(rng.uniform(0.1, 0.8),
                                                              rng.uniform(0.2, 2.0),
                                                              rng.uniform(0.0, 0.05))
                             : ReturnCurve::hyperbolic(rng.uniform(0.1, 0.8),
                                                       rng.uniform(0.2, 3.0));
        ReturnCurve g = ReturnCurve::hyperbolic(rng.uniform(0.1, 0.9),
                                                rng.uniform(0.2, 3.0));
        const BudgetProblem problem(Money{B}, Money{cf}, Money{ca}, f, g, Money{1e4});
        const auto r = allocate_budget(problem);

        // budget feasibility to 1e-9 relative
        const double spend = cf * r.x_f + ca * r.x_a;
        CHECK(oracle::close_rel(spend, B, 1e-9, 1e-9));

        // optimality vs an exhaustive 1e4-point grid on the budget line
        const auto objective = [&](double xf) {
            return problem.curve_f.value(xf) *
                   problem.curve_a.value(std::max(0.0, (B - cf * xf) / ca)) * 1e4;
        };
        const double grid_best = oracle::grid_min_value(objective, 0.0, B / cf, 10000);
        CHECK(r.expected_loss.amount <= grid_best + 1e-6 * std::max(1.0, grid_best));

        if (!r.corner) CHECK(std::abs(r.foc_gap) <= 1e-8);
    }
}

TEST_CASE("efficient_frontier anti-monotone objectives keep every grid point") {
    // cost slopes (-130 per unit A) dominate the risk gradient (<= 36), so TC
    // falls strictly while E[Loss] rises strictly: nothing is dominated
    const CostModel costs(CostCurve::linear(100, -90, MonotoneSense::Nonincreasing),
                          CostCurve::linear(50, -40, MonotoneSense::Nonincreasing));
    const RiskModel risky(Probability(0.2), HarmCurve::power(0.0, 0.9, 2.0), Money{100});
    const auto frontier = efficient_frontier(costs, risky, 101);
    CHECK(frontier.size() == 101);

    CHECK_THROWS_AS(efficient_frontier(costs, risky, 1), DomainError);
}

TEST_CASE("efficient_frontier matches the brute-force dominance oracle") {
    const CostModel costs = worked_costs();
    const RiskModel risk = worked_risk();
    const int grid = 1001;
    const auto frontier = efficient_frontier(costs, risk, grid);

    std::vector<oracle::Point2> pts;
    for (int i = 0; i < grid; ++i) {
        const double a = static_cast<double>(i) / (grid - 1);
        pts.push_back({a, total_cost(costs, risk, a).amount,
                       expected_loss(risk, a).amount});
    }
    const auto expected = oracle::brute_force_frontier(pts);

    REQUIRE(frontier.size() == expected.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        CHECK(frontier[i].a == expected[i].a);
        CHECK(frontier[i].total_cost.amount == expected[i].tc);
        CHECK(frontier[i].expected_loss.amount == expected[i].loss);
    }
}

TEST_CASE("efficient_frontier keeps one representative of duplicate points") {
    const CostModel flat_costs(CostCurve::linear(10, 0, MonotoneSense::Nonincreasing),
                               CostCurve::linear(5, 0, MonotoneSense::Nonincreasing));
    const RiskModel flat_risk(Probability(0.2), HarmCurve::table({{0.0, 0.4}, {1.0, 0.4}}),
                              Money{100});
    const auto frontier = efficient_frontier(flat_costs, flat_risk, 51);
    REQUIRE(frontier.size() == 1);
    CHECK(frontier[0].a == 0.0);
}

TEST_CASE("comparative statics on the worked example") {
    // the worked harm curve tops out at 0.9, so doubling its slope would
    // leave [0,1]; scale it by 1.1 instead and check the error propagation
    // separately below
    const PerturbationSet bumps{2.0, 2.0, 1.1, 0.5};
    const auto rows = comparative_statics_report(worked_costs(), worked_risk(), bumps);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CAPTURE(row.parameter);
        CHECK(row.direction_ok);
        CHECK(row.a_star_after <= row.a_star_before + 1e-7);
    }

    // slope x2 pushes the curve above 1: construction error propagates
    CHECK_THROWS_AS(comparative_statics_report(worked_costs(), worked_risk()), DomainError);

    // identity perturbation leaves a_star unchanged
    const PerturbationSet identity{1.0, 1.0, 1.0, 1.0};
    for (const auto& row :
         comparative_statics_report(worked_costs(), worked_risk(), identity)) {
        CHECK(row.a_star_after == row.a_star_before);
        CHECK(row.direction_ok);
    }

    // doubled p_failure agrees with the grid-search oracle
    const RiskModel doubled(Probability(0.06), HarmCurve::power(0.0, 0.9, 2.0),
                            Money{50000});
    const auto tc = [&](double a) { return total_cost(worked_costs(), doubled, a).amount; };
    const double oracle_a = oracle::grid_argmin(tc, 0.0, 1.0, 10000);
    const auto resolved = optimal_automation(worked_costs(), doubled);
    CHECK(std::abs(resolved.a_star - oracle_a) < 1e-3);
    CHECK(resolved.a_star <= kWorkedAStar + 1e-7);
}

TEST_CASE("comparative statics across random convex configurations") {
    SplitRng rng(8004);
    for (int i = 0; i < 20; ++i) {
        const auto cfg = random_convex_config(rng);
        for (const auto& row : comparative_statics_report(cfg.costs, cfg.risk)) {
            CAPTURE(row.parameter);
            CHECK(row.direction_ok);
        }
    }
}
