#include <gtest/gtest.h>

#include <cmath>

#include "hybridmech.hpp"

using namespace hybridmech;

namespace {

SweepSpec finesse_spec(std::size_t points = 60) {
    SweepSpec s;
    s.axis1 = {SweepParam::Finesse, 50.0, 1000.0, points, AxisScale::Log};
    s.cooling = {2.2e5};
    return s;
}

SweepSpec cooling_spec(std::size_t points = 30) {
    SweepSpec s = finesse_spec(points);
    s.axis2 = SweepAxis{SweepParam::GammaCool, 1e4, 1e6, points, AxisScale::Log};
    return s;
}

}  // namespace

TEST(Axis, LogAndLinearValues) {
    const SweepAxis lin{SweepParam::N, 1.0, 3.0, 3, AxisScale::Linear};
    EXPECT_EQ(lin.values(), (std::vector<double>{1.0, 2.0, 3.0}));
    const SweepAxis lg{SweepParam::Finesse, 10.0, 1000.0, 3, AxisScale::Log};
    EXPECT_NEAR(lg.value(1), 100.0, 1e-10);
    EXPECT_EQ(lg.value(2), 1000.0);
}

TEST(Axis, Validation) {
    EXPECT_THROW((SweepAxis{SweepParam::N, 1.0, 3.0, 1, AxisScale::Linear}.validate()), ValidationError);
    EXPECT_THROW((SweepAxis{SweepParam::N, 3.0, 1.0, 5, AxisScale::Linear}.validate()), ValidationError);
    EXPECT_THROW((SweepAxis{SweepParam::N, 0.0, 1.0, 5, AxisScale::Log}.validate()), ValidationError);
    EXPECT_THROW(sweep_param_from("length_L"), ValidationError);
}

TEST(SweepCoherent, RatioExponentsAndOptimum) {
    const SweepResult res = sweep_coherent(finesse_spec(), 1);
    std::vector<double> F, at, md;
    for (const auto& r : res.records) {
        ASSERT_TRUE(r.ok()) << r.status;
        F.push_back(r.x1);
        at.push_back(r.ratio_at);
        md.push_back(r.ratio_mdiff);
        EXPECT_NEAR(r.ratio_total, r.ratio_at + r.ratio_mdiff + r.ratio_mth, 1e-12 * r.ratio_total);
    }
    EXPECT_NEAR(loglog_slope(F, at), -1.0, 1e-6);
    EXPECT_NEAR(loglog_slope(F, md), 1.0, 1e-6);
    ASSERT_TRUE(res.best);
    const SweepRecord& b = res.records[*res.best];
    EXPECT_GE(b.x1, 250.0);
    EXPECT_LE(b.x1, 400.0);
    EXPECT_NEAR(b.ratio_total, 0.63, 0.01);
}

TEST(SweepCoherent, MatchesIndependentRates) {
    const SweepResult res = sweep_coherent(finesse_spec(7), 1);
    for (const auto& rec : res.records) {
        auto cav = table1_cavity();
        cav.finesse = rec.x1;
        const RateSet r = full_rates(build_system(table1_membrane(), table1_atoms(), cav));
        EXPECT_NEAR(rec.rates.g / r.g, 1.0, 1e-12);
        EXPECT_NEAR(rec.ratio_total / (r.gamma_total() / r.g), 1.0, 1e-12);
    }
}

TEST(SweepCoherent, RatiosScaleWithDecoherence) {
    SweepRecord rec;
    rec.rates = full_rates(table1_system());
    fill_ratios(rec);
    const double base = rec.ratio_total;
    rec.rates.gamma_at_diff *= 3.0;
    rec.rates.gamma_m_diff *= 3.0;
    rec.rates.gamma_m_th *= 3.0;
    fill_ratios(rec);
    EXPECT_NEAR(rec.ratio_total / base, 3.0, 1e-14);
}

TEST(SweepCooling, GlobalMinimum) {
    const SweepResult res = sweep_cooling(cooling_spec(), 1);
    ASSERT_TRUE(res.best);
    const SweepRecord& b = res.records[*res.best];
    EXPECT_GE(b.n_ss_exact, 0.4);
    EXPECT_LE(b.n_ss_exact, 1.5);
    EXPECT_GE(b.x1, 350.0);
    EXPECT_LE(b.x1, 600.0);
    EXPECT_GE(b.x2, 1.5e5);
    EXPECT_LE(b.x2, 3e5);
    for (const auto& r : res.records) {
        if (r.ok()) EXPECT_GE(r.n_ss_exact, 0.0);
    }
}

TEST(SweepCooling, SingleInteriorMinimumAlongCuts) {
    const SweepSpec spec = cooling_spec();
    const SweepResult res = sweep_cooling(spec, 1);
    for (std::size_t j : {std::size_t{5}, std::size_t{15}, std::size_t{22}}) {
        EXPECT_EQ(interior_minima(res, spec.axis1.points, spec.axis2->points, j), 1u) << "cut " << j;
    }
}

TEST(SweepCooling, AdiabaticCutBounded) {
    SweepSpec spec;
    spec.axis1 = {SweepParam::Finesse, 50.0, 500.0, 20, AxisScale::Log};
    spec.cooling = {2.4e5};
    const SweepResult res = run_sweep(spec, true, 1);
    for (const auto& r : res.records) {
        ASSERT_TRUE(r.ok());
        const double ratio = r.n_ss_exact / r.n_ss_adiabatic;
        EXPECT_LT(std::max(ratio, 1.0 / ratio), 2.0) << "F = " << r.x1;
    }
}

TEST(SweepCooling, BadCellsAreRecorded) {
    SweepSpec spec;
    spec.axis1 = {SweepParam::GammaCool, 0.0, 1e5, 3, AxisScale::Linear};
    spec.membrane.Q_m = INFINITY;
    const SweepResult res = sweep_cooling(spec, 2);
    ASSERT_EQ(res.records.size(), 3u);
    EXPECT_FALSE(res.records[0].ok());
    EXPECT_TRUE(res.records[2].ok());
}

TEST(Sweep, DeterministicAcrossWorkers) {
    const SweepSpec spec = cooling_spec(12);
    const SweepResult a = sweep_cooling(spec, 1);
    const SweepResult b = sweep_cooling(spec, 8);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        EXPECT_EQ(a.records[k].x1, b.records[k].x1);
        EXPECT_EQ(a.records[k].x2, b.records[k].x2);
        EXPECT_EQ(a.records[k].n_ss_exact, b.records[k].n_ss_exact);
        EXPECT_EQ(a.records[k].status, b.records[k].status);
    }
    EXPECT_EQ(a.best, b.best);
}

TEST(Optimize, TotalRatioMatchesSweep) {
    const OptimumRecord o =
        optimize(Objective::MinTotalRatio, {{SweepParam::Finesse, 50.0, 1000.0, AxisScale::Log}}, finesse_spec());
    EXPECT_NEAR(o.x[0], 310.0, 5.0);
    EXPECT_NEAR(o.value, 0.6332, 0.0005);
    EXPECT_FALSE(o.trace.empty());
    EXPECT_LE(o.value, o.trace.front().value);
}

TEST(Optimize, OccupationMatchesGrid) {
    const SweepResult grid = sweep_cooling(cooling_spec(), 0);
    const OptimumRecord o = optimize(Objective::MinOccupation,
                                     {{SweepParam::Finesse, 50.0, 1000.0, AxisScale::Log},
                                      {SweepParam::GammaCool, 1e4, 1e6, AxisScale::Log}},
                                     finesse_spec());
    EXPECT_LE(o.value, grid.records[*grid.best].n_ss_exact + 1e-9);
    EXPECT_NEAR(o.value, grid.records[*grid.best].n_ss_exact, 0.02);
}

TEST(Optimize, DegenerateBounds) {
    const OptimumRecord o = optimize(Objective::MinOccupation,
                                     {{SweepParam::Finesse, 450.0, 450.0, AxisScale::Log},
                                      {SweepParam::GammaCool, 2.2e5, 2.2e5, AxisScale::Linear}},
                                     finesse_spec());
    EXPECT_EQ(o.x[0], 450.0);
    EXPECT_EQ(o.x[1], 2.2e5);
    const double direct = occupations(steady_state(build_model(full_rates(table1_system()), {2.2e5}))).n_m;
    EXPECT_NEAR(o.value, direct, 1e-12);
}

TEST(Optimize, NoFeasiblePoint) {
    SweepSpec spec = finesse_spec();
    spec.membrane.Q_m = INFINITY;
    spec.cooling = {0.0};
    EXPECT_THROW(optimize(Objective::MinOccupation, {{SweepParam::N, 1e6, 1e8, AxisScale::Log}}, spec),
                 NoFeasiblePointError);
}
