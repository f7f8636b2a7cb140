#pragma once

#include <string>
#include <variant>
#include <vector>

#include "autorisk/cost_curve.hpp"
#include "autorisk/risk_core.hpp"

namespace autorisk {

// ---------------------------------------------------------------------------
// Total cost and the cost-minimizing automation level
// ---------------------------------------------------------------------------

/// TC(A) = C_auto(A) + C_oversight(A) + P(F) * P(H|F,A) * E[S|H].
Money total_cost(const CostModel& costs, const RiskModel& risk, double a);

/// dTC/dA. Analytic per curve family; throws at nondifferentiable points.
double total_cost_derivative(const CostModel& costs, const RiskModel& risk, double a);

struct OptimalAutomation {
    double a_star;       // in [0,1]
    double foc_residual; // dTC/dA at a_star, normalized by the grid derivative scale
    bool second_order_ok; // numeric d2TC/dA2 >= -1e-9 at a_star
    bool boundary;       // optimum sits at A = 0 or A = 1
};

/// Minimize TC over [0,1]: bracket sign changes of dTC/dA on a 1,000-point
/// interior grid, refine each bracket by bisection to `tol`, then take the
/// best of the refined roots and the two boundaries. A grid scan verifies the
/// result is a global minimum to 1e-6 relative. Degenerate flat objectives
/// tie-break to A = 0. Throws UnsupportedCurveError for THRESHOLD harm curves
/// and any table curve with interior knots.
OptimalAutomation optimal_automation(const CostModel& costs, const RiskModel& risk,
                                     double tol = 1e-8);

// ---------------------------------------------------------------------------
// Validation budget allocation
// ---------------------------------------------------------------------------

/// Diminishing-return curve for validation spend: P(F) = f(x_F) or
/// P(H|F,A) = g(x_A) with f' < 0 everywhere on x >= 0.
class ReturnCurve {
public:
    struct HyperbolicParams { double p0, k; };               // p0 / (1 + k*x)
    struct ExponentialFloorParams { double p0, k, floor; };  // floor + (p0-floor)*exp(-k*x)

    static ReturnCurve hyperbolic(double p0, double k);
    static ReturnCurve exponential_floor(double p0, double k, double floor);

    double value(double x) const;
    double derivative(double x) const;
    double initial() const; // value at x = 0

    bool is_hyperbolic() const { return std::holds_alternative<HyperbolicParams>(params_); }

    template <typename T>
    const T& params() const { return std::get<T>(params_); }

private:
    using Params = std::variant<HyperbolicParams, ExponentialFloorParams>;
    explicit ReturnCurve(Params p) : params_(std::move(p)) {}
    Params params_;
};

struct BudgetProblem {
    Money budget;        // B >= 0
    Money cost_f;        // c_F > 0, per unit of x_F
    Money cost_a;        // c_A > 0, per unit of x_A
    ReturnCurve curve_f; // P(F) as a function of x_F
    ReturnCurve curve_a; // P(H|F,A) as a function of x_A
    Money severity_mean; // E[S|H] > 0

    BudgetProblem(Money budget, Money cost_f, Money cost_a,
                  ReturnCurve curve_f, ReturnCurve curve_a, Money severity_mean);
};

struct AllocationResult {
    double x_f;          // >= 0
    double x_a;          // >= 0; c_F*x_f + c_A*x_a == B to 1e-9 relative
    Money expected_loss; // f(x_f) * g(x_a) * E[S|H]
    double foc_gap;      // normalized residual of the equal-marginal-value condition
    bool corner;
};

/// Minimize f(x_f)*g(x_a)*E[S|H] on the budget line. One-dimensional search
/// over x_f with x_a pinned by the budget: bracket the sign change of the
/// first-order condition, bisect, and fall back to the better corner when the
/// condition never crosses zero.
AllocationResult allocate_budget(const BudgetProblem& problem, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Efficient frontier and comparative statics
// ---------------------------------------------------------------------------

struct FrontierPoint {
    double a;
    Money total_cost;
    Money expected_loss;
};

/// Evaluate (TC, E[Loss]) on an equispaced A-grid and keep the non-dominated
/// points: no other grid point weakly better in both coordinates and strictly
/// better in one. Exact duplicates keep a single representative (lowest a).
/// Result is sorted by a.
std::vector<FrontierPoint> efficient_frontier(const CostModel& costs,
                                              const RiskModel& risk, int grid_size);

struct PerturbationSet {
    double severity_factor = 2.0;
    double p_failure_factor = 2.0;
    double slope_factor = 2.0;
    double oversight_cost_factor = 0.5;
};

struct ComparativeStaticsRow {
    std::string parameter;
    double a_star_before;
    double a_star_after;
    bool direction_ok;
};

/// Re-solve the optimal automation level under each standard perturbation and
/// check the comparative-statics direction: higher severity, higher failure
/// probability, a steeper harm curve, and cheaper oversight must each leave
/// a_star no higher.
std::vector<ComparativeStaticsRow> comparative_statics_report(
    const CostModel& costs, const RiskModel& risk,
    const PerturbationSet& bumps = {}, double tol = 1e-8);

} // namespace autorisk
