#include "autorisk/estimators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "autorisk/errors.hpp"

namespace autorisk {

namespace {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd xtx_inv;
    double sigma2;    // RSS / (n - p)
    double rss;
    std::int64_t n;
    int p;

    double se(int j) const { return std::sqrt(sigma2 * xtx_inv(j, j)); }
};

// Plain least squares with a rank check; conventional homoskedastic errors.
OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const auto n = x.rows();
    const auto p = x.cols();
    if (n <= p)
        throw EstimationError("regression needs more rows than parameters (" +
                              std::to_string(n) + " rows, " + std::to_string(p) +
                              " parameters)");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < p)
        throw SingularDesignError("design matrix is rank deficient (rank " +
                                  std::to_string(qr.rank()) + " of " +
                                  std::to_string(p) + ")");
    OlsFit fit;
    fit.beta = qr.solve(y);
    const Eigen::VectorXd resid = y - x * fit.beta;
    fit.rss = resid.squaredNorm();
    fit.n = n;
    fit.p = static_cast<int>(p);
    fit.sigma2 = fit.rss / static_cast<double>(n - p);
    fit.xtx_inv = (x.transpose() * x).inverse();
    return fit;
}

} // namespace

double field_value(const IncidentRecord& r, Field f) {
    switch (f) {
    case Field::Failed: return r.failed ? 1.0 : 0.0;
    case Field::Executed: return r.executed ? 1.0 : 0.0;
    case Field::Harmed: return r.harmed ? 1.0 : 0.0;
    case Field::Loss: return r.loss;
    case Field::ALevel: return r.a_level;
    case Field::Covariate: return r.covariate;
    case Field::Instrument: return r.instrument;
    case Field::Group: return static_cast<double>(r.group);
    case Field::Time: return static_cast<double>(r.time);
    case Field::RunningVar: return r.running_var;
    }
    throw DomainError("unknown record field");
}

EstimateReport estimate_ols(const IncidentDataset& ds, Field outcome,
                            const std::vector<Field>& regressors) {
    if (regressors.empty())
        throw EstimationError("ols: at least one regressor required");
    const auto n = static_cast<Eigen::Index>(ds.size());
    const auto p = static_cast<Eigen::Index>(regressors.size()) + 1;

    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = ds.records[static_cast<std::size_t>(i)];
        y(i) = field_value(r, outcome);
        x(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < p; ++j)
            x(i, j) = field_value(r, regressors[static_cast<std::size_t>(j - 1)]);
    }
    const OlsFit fit = fit_ols(x, y);
    return EstimateReport{EstimatorMethod::Ols, fit.beta(1), fit.se(1), n, std::nullopt};
}

EstimateReport estimate_iv_2sls(const IncidentDataset& ds) {
    const auto n = static_cast<Eigen::Index>(ds.size());
    if (n < 4) throw EstimationError("iv: too few rows");

    Eigen::VectorXd a(n), h(n), z(n), cov(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = ds.records[static_cast<std::size_t>(i)];
        a(i) = r.a_level;
        h(i) = r.harmed ? 1.0 : 0.0;
        z(i) = r.instrument;
        cov(i) = r.covariate;
    }

    // Stage 1: A ~ 1 + Z + X, with the partial F for the instrument computed
    // against the restricted model A ~ 1 + X.
    Eigen::MatrixXd x1(n, 3);
    x1.col(0).setOnes();
    x1.col(1) = z;
    x1.col(2) = cov;
    const OlsFit stage1 = fit_ols(x1, a);

    Eigen::MatrixXd x1r(n, 2);
    x1r.col(0).setOnes();
    x1r.col(1) = cov;
    const OlsFit restricted = fit_ols(x1r, a);

    const double f_stat =
        (restricted.rss - stage1.rss) / (stage1.rss / static_cast<double>(n - 3));
    if (!(f_stat >= 10.0))
        throw WeakInstrumentError("iv: first-stage F = " + std::to_string(f_stat) +
                                  " < 10; instrument has no usable strength");

    // Stage 2 on the fitted automation level.
    const Eigen::VectorXd a_hat = x1 * stage1.beta;
    Eigen::MatrixXd x2(n, 3);
    x2.col(0).setOnes();
    x2.col(1) = a_hat;
    x2.col(2) = cov;
    const OlsFit stage2 = fit_ols(x2, h);

    // Conventional 2SLS errors: residuals evaluated at the observed A, not
    // the fitted one.
    const Eigen::VectorXd structural_resid =
        h - (stage2.beta(0) + stage2.beta(1) * a.array() + stage2.beta(2) * cov.array())
                .matrix();
    const double sigma2 = structural_resid.squaredNorm() / static_cast<double>(n - 3);
    const double se = std::sqrt(sigma2 * stage2.xtx_inv(1, 1));

    return EstimateReport{EstimatorMethod::Iv2sls, stage2.beta(1), se, n, f_stat};
}

EstimateReport estimate_did(const IncidentDataset& ds) {
    std::set<int> groups, times;
    for (const auto& r : ds.records) {
        groups.insert(r.group);
        times.insert(r.time);
    }
    if (groups.size() < 2)
        throw IncompletePanelError("did: need at least two groups, found " +
                                   std::to_string(groups.size()));
    if (times.size() < 2)
        throw IncompletePanelError("did: need at least two periods, found " +
                                   std::to_string(times.size()));

    std::set<std::pair<int, int>> cells;
    for (const auto& r : ds.records) cells.insert({r.group, r.time});
    if (cells.size() != groups.size() * times.size())
        throw IncompletePanelError("did: panel has empty group x period cells (" +
                                   std::to_string(cells.size()) + " of " +
                                   std::to_string(groups.size() * times.size()) +
                                   " populated)");

    // Dummy columns for all but the first group / period, plus Treat x Post.
    const std::vector<int> gl(groups.begin(), groups.end());
    const std::vector<int> tl(times.begin(), times.end());
    const auto n = static_cast<Eigen::Index>(ds.size());
    const auto p = static_cast<Eigen::Index>(1 + (gl.size() - 1) + (tl.size() - 1) + 1);

    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = ds.records[static_cast<std::size_t>(i)];
        y(i) = r.harmed ? 1.0 : 0.0;
        x(i, 0) = 1.0;
        Eigen::Index col = 1;
        for (std::size_t g = 1; g < gl.size(); ++g, ++col)
            if (r.group == gl[g]) x(i, col) = 1.0;
        for (std::size_t t = 1; t < tl.size(); ++t, ++col)
            if (r.time == tl[t]) x(i, col) = 1.0;
        const bool treat = r.group != gl.front();
        const bool post = r.time != tl.front();
        x(i, col) = treat && post ? 1.0 : 0.0;
    }
    const OlsFit fit = fit_ols(x, y);
    const auto interaction = p - 1;
    return EstimateReport{EstimatorMethod::Did, fit.beta(interaction),
                          fit.se(static_cast<int>(interaction)), n, std::nullopt};
}

EstimateReport estimate_rd(const IncidentDataset& ds, double cutoff, double bandwidth) {
    if (!(bandwidth > 0.0)) throw DomainError("rd: bandwidth must be positive");

    std::vector<const IncidentRecord*> left, right;
    for (const auto& r : ds.records) {
        const double d = r.running_var - cutoff;
        if (d < -bandwidth || d > bandwidth) continue;
        (d < 0.0 ? left : right).push_back(&r);
    }
    if (left.size() < 20 || right.size() < 20)
        throw SparseWindowError("rd: need >= 20 rows on each side within the bandwidth, "
                                "found " + std::to_string(left.size()) + " left / " +
                                std::to_string(right.size()) + " right");

    const auto fit_side = [&](const std::vector<const IncidentRecord*>& side) {
        const auto n = static_cast<Eigen::Index>(side.size());
        Eigen::MatrixXd x(n, 2);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i, 0) = 1.0;
            x(i, 1) = side[static_cast<std::size_t>(i)]->running_var - cutoff;
            y(i) = side[static_cast<std::size_t>(i)]->harmed ? 1.0 : 0.0;
        }
        return fit_ols(x, y);
    };

    const OlsFit fl = fit_side(left);
    const OlsFit fr = fit_side(right);
    const double jump = fr.beta(0) - fl.beta(0);
    const double se = std::sqrt(fl.se(0) * fl.se(0) + fr.se(0) * fr.se(0));
    return EstimateReport{EstimatorMethod::Rd, jump, se,
                          static_cast<std::int64_t>(left.size() + right.size()),
                          std::nullopt};
}

} // namespace autorisk
