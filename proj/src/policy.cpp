#include "autorisk/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace autorisk {

namespace {

constexpr int kDerivativeGridPoints = 1000;
constexpr double kObjectiveRelTol = 1e-6;
constexpr int kBisectMaxIter = 200;

struct Candidate {
    double x;
    bool boundary;
};

// Bisection on a sign change f(lo) < 0 < f(hi). Stops once the interval is
// narrower than `tol` and the residual has dropped below tol*scale, or the
// interval hits floating-point resolution.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol, double scale) {
    for (int it = 0; it < kBisectMaxIter && (hi - lo) > 5e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        (fm < 0.0 ? lo : hi) = mid;
        if ((hi - lo) <= tol && std::abs(fm) <= tol * scale) break;
    }
    return 0.5 * (lo + hi);
}

void check_differentiable(const CostModel& costs, const RiskModel& risk) {
    if (risk.harm_curve().family() == HarmFamily::Threshold)
        throw UnsupportedCurveError("optimal automation: THRESHOLD harm curve is not "
                                    "differentiable");
    if (!risk.harm_curve().differentiable_on_open_interval())
        throw UnsupportedCurveError("optimal automation: harm curve has interior knots");
    if (!costs.c_auto.differentiable_on_open_interval() ||
        !costs.c_oversight.differentiable_on_open_interval())
        throw UnsupportedCurveError("optimal automation: cost curve has interior knots");
}

} // namespace

Money total_cost(const CostModel& costs, const RiskModel& risk, double a) {
    return costs.c_auto.value(a) + costs.c_oversight.value(a) + expected_loss(risk, a);
}

double total_cost_derivative(const CostModel& costs, const RiskModel& risk, double a) {
    return costs.c_auto.derivative(a) + costs.c_oversight.derivative(a) +
           loss_gradient(risk, a).amount;
}

OptimalAutomation optimal_automation(const CostModel& costs, const RiskModel& risk,
                                     double tol) {
    if (!(tol > 0.0)) throw DomainError("solver tolerance must be positive");
    check_differentiable(costs, risk);

    const auto deriv = [&](double a) { return total_cost_derivative(costs, risk, a); };
    const auto tc = [&](double a) { return total_cost(costs, risk, a).amount; };

    // Interior grid, padded with near-boundary insets so minima hiding in the
    // edge cells still get bracketed. Derivative evaluations stay strictly
    // inside (0,1), where boundary knots and fractional-power slopes are
    // legitimately undefined. Any dip left unexplored below the inset can
    // move TC by at most max|dTC/dA| * 1e-9, far under the global-check
    // tolerance.
    constexpr double kEdgeInset = 1e-9;
    std::vector<double> grid_a;
    grid_a.reserve(kDerivativeGridPoints + 2);
    grid_a.push_back(kEdgeInset);
    for (int i = 0; i < kDerivativeGridPoints; ++i)
        grid_a.push_back((i + 0.5) / kDerivativeGridPoints);
    grid_a.push_back(1.0 - kEdgeInset);

    std::vector<double> grid_g(grid_a.size());
    double scale = 1.0;
    for (std::size_t i = 0; i < grid_a.size(); ++i) {
        grid_g[i] = deriv(grid_a[i]);
        scale = std::max(scale, std::abs(grid_g[i]));
    }

    // Boundaries first so that flat objectives tie-break to A = 0.
    std::vector<Candidate> candidates{{0.0, true}, {1.0, true}};
    for (std::size_t i = 0; i < grid_a.size(); ++i) {
        if (grid_g[i] == 0.0) candidates.push_back({grid_a[i], false});
        if (i + 1 < grid_a.size() && grid_g[i] < 0.0 && grid_g[i + 1] > 0.0)
            candidates.push_back({bisect(deriv, grid_a[i], grid_a[i + 1], tol, scale), false});
    }

    Candidate best = candidates.front();
    double best_tc = tc(best.x);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double v = tc(candidates[i].x);
        if (v < best_tc) {
            best = candidates[i];
            best_tc = v;
        }
    }

    // Global sanity scan: no grid point may beat the chosen optimum.
    double grid_min = std::min(tc(0.0), tc(1.0));
    for (double a : grid_a) grid_min = std::min(grid_min, tc(a));
    if (best_tc > grid_min + kObjectiveRelTol * std::max(1.0, std::abs(grid_min)))
        throw DomainError("optimal automation failed the global grid check");

    double residual = std::numeric_limits<double>::quiet_NaN();
    try {
        residual = deriv(best.x) / scale;
    } catch (const NondifferentiableError&) {
        // boundary of a curve whose slope is undefined exactly there
    }

    // Numeric second derivative: central difference of the analytic slope,
    // window shifted to stay strictly inside (0,1).
    const double h = 1e-5;
    const double lo = std::clamp(best.x - h, 1e-9, 1.0 - 1e-9);
    const double hi = std::clamp(best.x + h, 1e-9, 1.0 - 1e-9);
    const double second = (deriv(hi) - deriv(lo)) / (hi - lo);

    return OptimalAutomation{best.x, residual, second >= -1e-9, best.boundary};
}

// ---------------------------------------------------------------------------

ReturnCurve ReturnCurve::hyperbolic(double p0, double k) {
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw DomainError("return curve p0 must be in (0,1]");
    if (!(k > 0.0)) throw DomainError("return curve k must be positive");
    return ReturnCurve(HyperbolicParams{p0, k});
}

ReturnCurve ReturnCurve::exponential_floor(double p0, double k, double floor) {
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw DomainError("return curve p0 must be in (0,1]");
    if (!(k > 0.0)) throw DomainError("return curve k must be positive");
    if (!(floor >= 0.0 && floor < p0))
        throw DomainError("return curve floor must be in [0, p0)");
    return ReturnCurve(ExponentialFloorParams{p0, k, floor});
}

double ReturnCurve::value(double x) const {
    if (!(x >= 0.0)) throw DomainError("return curve defined for x >= 0");
    if (const auto* p = std::get_if<HyperbolicParams>(&params_))
        return p->p0 / (1.0 + p->k * x);
    const auto& p = std::get<ExponentialFloorParams>(params_);
    return p.floor + (p.p0 - p.floor) * std::exp(-p.k * x);
}

double ReturnCurve::derivative(double x) const {
    if (!(x >= 0.0)) throw DomainError("return curve defined for x >= 0");
    if (const auto* p = std::get_if<HyperbolicParams>(&params_)) {
        const double d = 1.0 + p->k * x;
        return -p->p0 * p->k / (d * d);
    }
    const auto& p = std::get<ExponentialFloorParams>(params_);
    return -p.k * (p.p0 - p.floor) * std::exp(-p.k * x);
}

double ReturnCurve::initial() const { return value(0.0); }

BudgetProblem::BudgetProblem(Money budget_, Money cost_f_, Money cost_a_,
                             ReturnCurve curve_f_, ReturnCurve curve_a_,
                             Money severity_mean_)
    : budget(budget_), cost_f(cost_f_), cost_a(cost_a_),
      curve_f(std::move(curve_f_)), curve_a(std::move(curve_a_)),
      severity_mean(severity_mean_) {
    if (!(budget.amount >= 0.0)) throw DomainError("budget must be >= 0");
    if (!(cost_f.amount > 0.0 && cost_a.amount > 0.0))
        throw DomainError("unit costs must be positive");
    if (!(severity_mean.amount > 0.0))
        throw DomainError("severity_mean must be positive");
}

AllocationResult allocate_budget(const BudgetProblem& problem, double tol) {
    if (!(tol > 0.0)) throw DomainError("solver tolerance must be positive");
    const double B = problem.budget.amount;
    const double cf = problem.cost_f.amount;
    const double ca = problem.cost_a.amount;
    const double xf_max = B / cf;

    const auto xa_of = [&](double xf) { return std::max(0.0, (B - cf * xf) / ca); };
    const auto objective = [&](double xf) {
        return problem.curve_f.value(xf) * problem.curve_a.value(xa_of(xf));
    };
    // Equal-marginal-value condition with the severity factor cancelled;
    // proportional to the derivative of the objective along the budget line.
    const auto residual = [&](double xf) {
        const double xa = xa_of(xf);
        return problem.curve_a.value(xa) * problem.curve_f.derivative(xf) / cf -
               problem.curve_f.value(xf) * problem.curve_a.derivative(xa) / ca;
    };

    // Normalized residual: the gap between the two sides of the
    // equal-marginal-value condition relative to their magnitude.
    const auto normalized_gap = [&](double xf) {
        const double xa = xa_of(xf);
        const double side_f = problem.curve_a.value(xa) * problem.curve_f.derivative(xf) / cf;
        const double side_a = problem.curve_f.value(xf) * problem.curve_a.derivative(xa) / ca;
        const double scale = std::max({std::abs(side_f), std::abs(side_a), 1e-300});
        return (side_f - side_a) / scale;
    };

    std::vector<Candidate> candidates{{0.0, true}};
    if (xf_max > 0.0) {
        candidates.push_back({xf_max, true});
        const int n = kDerivativeGridPoints;
        const double width_floor = 5e-16 * std::max(1.0, xf_max);
        std::vector<double> gx(n + 1), gr(n + 1);
        for (int i = 0; i <= n; ++i) {
            gx[i] = xf_max * i / n;
            gr[i] = residual(gx[i]);
        }
        for (int i = 0; i < n; ++i) {
            if (gr[i] == 0.0) candidates.push_back({gx[i], false});
            if (!(gr[i] < 0.0 && gr[i + 1] > 0.0)) continue;
            double lo = gx[i], hi = gx[i + 1];
            for (int it = 0; it < kBisectMaxIter && (hi - lo) > width_floor; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double rm = residual(mid);
                if (rm == 0.0) { lo = hi = mid; break; }
                (rm < 0.0 ? lo : hi) = mid;
                if (std::abs(normalized_gap(0.5 * (lo + hi))) <= 0.1 * tol) break;
            }
            candidates.push_back({0.5 * (lo + hi), false});
        }
    }

    Candidate best = candidates.front();
    double best_obj = objective(best.x);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double v = objective(candidates[i].x);
        if (v < best_obj) {
            best = candidates[i];
            best_obj = v;
        }
    }

    const double xa = xa_of(best.x);
    const double side_f = problem.curve_a.value(xa) * problem.curve_f.derivative(best.x) / cf;
    const double side_a = problem.curve_f.value(best.x) * problem.curve_a.derivative(xa) / ca;
    const double foc_scale = std::max({std::abs(side_f), std::abs(side_a), 1e-300});
    return AllocationResult{best.x, xa,
                            Money{best_obj * problem.severity_mean.amount},
                            (side_f - side_a) / foc_scale, best.boundary};
}

// ---------------------------------------------------------------------------

std::vector<FrontierPoint> efficient_frontier(const CostModel& costs,
                                              const RiskModel& risk, int grid_size) {
    if (grid_size < 2) throw DomainError("frontier grid must be >= 2");

    std::vector<FrontierPoint> pts(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        const double a = static_cast<double>(i) / (grid_size - 1);
        pts[i] = FrontierPoint{a, total_cost(costs, risk, a), expected_loss(risk, a)};
    }

    // Sweep in (TC, loss, a) order. A point survives iff its loss is strictly
    // below every already-accepted point's loss; equal (TC, loss) pairs keep
    // the lowest-a representative.
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const auto ti = pts[i].total_cost.amount, tj = pts[j].total_cost.amount;
        if (ti != tj) return ti < tj;
        const auto li = pts[i].expected_loss.amount, lj = pts[j].expected_loss.amount;
        if (li != lj) return li < lj;
        return pts[i].a < pts[j].a;
    });

    std::vector<FrontierPoint> frontier;
    double min_loss = std::numeric_limits<double>::infinity();
    for (int i : order) {
        if (pts[i].expected_loss.amount < min_loss) {
            frontier.push_back(pts[i]);
            min_loss = pts[i].expected_loss.amount;
        }
    }
    std::sort(frontier.begin(), frontier.end(),
              [](const FrontierPoint& x, const FrontierPoint& y) { return x.a < y.a; });
    return frontier;
}

std::vector<ComparativeStaticsRow> comparative_statics_report(
    const CostModel& costs, const RiskModel& risk, const PerturbationSet& bumps,
    double tol) {
    const double slack = 10.0 * tol;
    const double base = optimal_automation(costs, risk, tol).a_star;

    // Bumped models use a point-mass severity: comparative statics only read
    // the mean, and rescaling an explicit distribution is not meaningful here.
    const auto bumped_risk = [&](Probability pf, const HarmCurve& curve, Money sev) {
        return RiskModel(pf, curve, sev);
    };

    const auto direction_ok = [&](double factor, bool smaller_factor_means_lower,
                                  double after) {
        // For severity/p_failure/slope: factor >= 1 must not raise a_star.
        // For oversight cost the cheap direction is factor <= 1.
        const bool expect_not_higher = smaller_factor_means_lower ? factor <= 1.0
                                                                  : factor >= 1.0;
        return expect_not_higher ? after <= base + slack : after >= base - slack;
    };

    std::vector<ComparativeStaticsRow> rows;

    {
        const auto r = bumped_risk(risk.p_failure(), risk.harm_curve(),
                                   risk.severity_mean() * bumps.severity_factor);
        const double after = optimal_automation(costs, r, tol).a_star;
        rows.push_back({"severity_mean", base, after,
                        direction_ok(bumps.severity_factor, false, after)});
    }
    {
        const auto r = bumped_risk(Probability(risk.p_failure().value() *
                                               bumps.p_failure_factor),
                                   risk.harm_curve(), risk.severity_mean());
        const double after = optimal_automation(costs, r, tol).a_star;
        rows.push_back({"p_failure", base, after,
                        direction_ok(bumps.p_failure_factor, false, after)});
    }
    {
        const auto r = bumped_risk(risk.p_failure(),
                                   risk.harm_curve().with_slope_scaled(bumps.slope_factor),
                                   risk.severity_mean());
        const double after = optimal_automation(costs, r, tol).a_star;
        rows.push_back({"harm_curve_slope", base, after,
                        direction_ok(bumps.slope_factor, false, after)});
    }
    {
        const CostModel c(costs.c_auto, costs.c_oversight.scaled(bumps.oversight_cost_factor));
        const double after = optimal_automation(c, risk, tol).a_star;
        rows.push_back({"oversight_cost", base, after,
                        direction_ok(bumps.oversight_cost_factor, true, after)});
    }
    return rows;
}

} // namespace autorisk
