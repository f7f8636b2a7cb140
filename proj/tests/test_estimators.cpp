#include <doctest.h>

#include <cmath>

#include "autorisk/errors.hpp"
#include "autorisk/estimators.hpp"
#include "autorisk/observational.hpp"
#include "autorisk/rng.hpp"

using namespace autorisk;

namespace {

// Confounded design used throughout: strong shared X loading, workable
// instrument, mild noise. Naive OLS of H on A picks up the confounder;
// 2SLS strips it.
ObservationalConfig confounded(std::int64_t n, std::uint64_t seed) {
    return ObservationalConfig{n, 0.8, 0.12, 0.1, 0.05, 0.0, 0.0, 0.0, seed};
}

IncidentRecord make_row(double y, double x) {
    IncidentRecord r;
    r.loss = y;
    r.failed = r.executed = r.harmed = y > 0.0;
    r.covariate = x;
    return r;
}

} // namespace

TEST_CASE("ols recovers an exact linear relationship with zero error") {
    IncidentDataset ds;
    for (int i = 0; i < 30; ++i) {
        const double x = 0.1 * i;
        ds.records.push_back(make_row(2.0 + 3.0 * x, x));
    }
    const auto r = estimate_ols(ds, Field::Loss, {Field::Covariate});
    CHECK(r.point == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.std_error == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(r.n_used == 30);
}

TEST_CASE("ols rejects degenerate designs") {
    IncidentDataset constant;
    for (int i = 0; i < 30; ++i) constant.records.push_back(make_row(1.0 + 0.01 * i, 0.7));
    CHECK_THROWS_AS(estimate_ols(constant, Field::Loss, {Field::Covariate}),
                    SingularDesignError);

    IncidentDataset tiny;
    tiny.records.push_back(make_row(1.0, 0.1));
    tiny.records.push_back(make_row(2.0, 0.4));
    CHECK_THROWS_AS(estimate_ols(tiny, Field::Loss, {Field::Covariate}),
                    EstimationError);
}

TEST_CASE("naive ols is biased on confounded data, iv is not") {
    const auto ds = generate_observational(confounded(50000, 314));

    const auto naive = estimate_ols(ds, Field::Harmed, {Field::ALevel});
    CHECK(std::abs(naive.point - 0.8) / 0.8 > 0.25);

    const auto iv = estimate_iv_2sls(ds);
    CHECK(std::abs(iv.point - 0.8) / 0.8 < 0.10);
    REQUIRE(iv.first_stage_f.has_value());
    CHECK(*iv.first_stage_f >= 10.0);
    CHECK(iv.std_error > 0.0);
}

TEST_CASE("ols and iv agree when there is no confounding") {
    ObservationalConfig cfg = confounded(50000, 2718);
    cfg.confounder_strength = 0.0;
    const auto ds = generate_observational(cfg);
    const auto ols = estimate_ols(ds, Field::Harmed, {Field::ALevel});
    const auto iv = estimate_iv_2sls(ds);
    const double joint_se = std::sqrt(ols.std_error * ols.std_error +
                                      iv.std_error * iv.std_error);
    CHECK(std::abs(ols.point - iv.point) <= 2.0 * joint_se);
}

TEST_CASE("irrelevant instruments are refused") {
    ObservationalConfig cfg = confounded(20000, 99);
    cfg.instrument_strength = 0.0;
    const auto ds = generate_observational(cfg);
    CHECK_THROWS_AS(estimate_iv_2sls(ds), WeakInstrumentError);
}

TEST_CASE("did recovers the treatment effect") {
    ObservationalConfig cfg{40000, 0.1, 0.0, 0.1, 0.05, 0.3, 0.0, 0.0, 555};
    const auto ds = generate_observational(cfg);
    const auto r = estimate_did(ds);
    CHECK(std::abs(r.point - 0.3) <= 3.0 * r.std_error);

    cfg.did_effect = 0.0;
    cfg.seed = 556;
    const auto null_r = estimate_did(generate_observational(cfg));
    CHECK(std::abs(null_r.point) <= 3.0 * null_r.std_error);
}

TEST_CASE("did demands a complete panel") {
    ObservationalConfig cfg{1000, 0.1, 0.0, 0.1, 0.05, 0.2, 0.0, 0.0, 1};
    auto ds = generate_observational(cfg);

    IncidentDataset single_period = ds;
    for (auto& r : single_period.records) r.time = 0;
    CHECK_THROWS_AS(estimate_did(single_period), IncompletePanelError);

    IncidentDataset missing_cell = ds;
    std::erase_if(missing_cell.records,
                  [](const IncidentRecord& r) { return r.group == 1 && r.time == 1; });
    // keep the group and period present elsewhere so only the cell is empty
    CHECK_THROWS_AS(estimate_did(missing_cell), IncompletePanelError);
}

TEST_CASE("rd recovers the jump at the cutoff") {
    ObservationalConfig cfg{30000, 0.1, 0.0, 0.1, 0.05, 0.0, 0.25, 0.25, 777};
    const auto ds = generate_observational(cfg);
    const auto r = estimate_rd(ds, 0.25, 0.5);
    CHECK(std::abs(r.point - 0.25) <= 3.0 * r.std_error);

    ObservationalConfig flat = cfg;
    flat.rd_jump = 0.0;
    flat.seed = 778;
    const auto null_r = estimate_rd(generate_observational(flat), 0.25, 0.5);
    CHECK(std::abs(null_r.point) <= 3.0 * null_r.std_error);
}

TEST_CASE("rd refuses sparse windows and bad bandwidths") {
    ObservationalConfig cfg{5000, 0.1, 0.0, 0.1, 0.05, 0.0, 0.0, 0.2, 4};
    const auto ds = generate_observational(cfg);
    CHECK_THROWS_AS(estimate_rd(ds, 0.0, -0.5), DomainError);
    // running var lives on [-1, 1]; a cutoff shifted beyond the support
    // leaves one side empty
    CHECK_THROWS_AS(estimate_rd(ds, 1.5, 0.4), SparseWindowError);
    CHECK_THROWS_AS(estimate_rd(ds, 0.0, 1e-4), SparseWindowError);
}

TEST_CASE("all four estimators recover their parameters across 200 seeded trials") {
    int ols_ok = 0, iv_ok = 0, did_ok = 0, rd_ok = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        // no confounding, so every estimator targets its own true parameter
        ObservationalConfig cfg{4000, 0.25, 0.0, 0.12, 0.05, 0.2, 0.0, 0.15,
                                90000 + static_cast<std::uint64_t>(t)};
        const auto ds = generate_observational(cfg);

        const auto ols = estimate_ols(ds, Field::Harmed, {Field::ALevel, Field::Covariate});
        ols_ok += std::abs(ols.point - cfg.true_gradient) <= 3.0 * ols.std_error;

        const auto iv = estimate_iv_2sls(ds);
        iv_ok += std::abs(iv.point - cfg.true_gradient) <= 3.0 * iv.std_error;

        const auto did = estimate_did(ds);
        did_ok += std::abs(did.point - cfg.did_effect) <= 3.0 * did.std_error;

        const auto rd = estimate_rd(ds, cfg.rd_cutoff, 0.6);
        rd_ok += std::abs(rd.point - cfg.rd_jump) <= 3.0 * rd.std_error;
    }
    // 3-sigma coverage leaves little room; 95% of 200 is the contract
    CHECK(ols_ok >= 190);
    CHECK(iv_ok >= 190);
    CHECK(did_ok >= 190);
    CHECK(rd_ok >= 190);
}

TEST_CASE("estimates are bit-identical across runs with one seed") {
    const auto ds1 = generate_observational(confounded(5000, 123));
    const auto ds2 = generate_observational(confounded(5000, 123));
    const auto a = estimate_iv_2sls(ds1);
    const auto b = estimate_iv_2sls(ds2);
    CHECK(a.point == b.point);
    CHECK(a.std_error == b.std_error);
    CHECK(*a.first_stage_f == *b.first_stage_f);
}
