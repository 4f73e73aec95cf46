#include <gtest/gtest.h>

#include <cmath>

#include "hybridmech.hpp"

using namespace hybridmech;

namespace {

ThermalConfig with_ratio(double w_over_l) {
    ThermalConfig c = thermal_config(table1_system());
    c.w_m = w_over_l * c.side_l;
    return c;
}

}  // namespace

TEST(Thermal, AbsorbedPowerTable1) {
    const ThermalConfig c = thermal_config(table1_system());
    EXPECT_NEAR(absorbed_power(c), 1e-6 * 4.0 * 450.0 * 2.8e-3 / pi, 1e-20);
}

TEST(Thermal, ProfileBoundaryAndContinuity) {
    const ThermalConfig c = thermal_config(table1_system());
    const double R = c.side_l / 2.0;
    const double w = c.w_m;
    const double scale = analytic_circular(c).delta_T;
    EXPECT_NEAR(radial_temperature(c, R) - c.T0, 0.0, 1e-10 * scale);
    const double eps = 1e-12 * w;
    EXPECT_NEAR(radial_temperature(c, w - eps), radial_temperature(c, w + eps), 1e-10 * scale);
    EXPECT_NEAR(radial_temperature_slope(c, w - eps), radial_temperature_slope(c, w + eps),
                1e-10 * std::abs(radial_temperature_slope(c, w)));
    EXPECT_NEAR(radial_temperature(c, 0.0) - c.T0, scale, 1e-10 * scale);
    EXPECT_THROW(radial_temperature(c, 1.01 * R), OutOfDomainError);
}

TEST(Thermal, HeatFluxThroughRimEqualsAbsorbedPower) {
    const ThermalConfig c = thermal_config(table1_system());
    const double R = c.side_l / 2.0;
    const double flux = -c.kappa_th * c.d_m * two_pi * R * radial_temperature_slope(c, R);
    EXPECT_NEAR(flux / absorbed_power(c), 1.0, 1e-12);
}

TEST(Thermal, LinkDefinition) {
    const ThermalConfig c = thermal_config(table1_system());
    const ThermalResult r = analytic_circular(c);
    EXPECT_NEAR(r.K_th * r.delta_T / r.P_abs, 1.0, 1e-12);
    // The shipped conductivity reproduces the reference link of 4e-7 W/K.
    EXPECT_NEAR(r.K_th / 4e-7, 1.0, 1e-4);
}

TEST(Thermal, AverageTemperatureMatchesQuadrature) {
    const ThermalConfig c = thermal_config(table1_system());
    const ThermalResult r = analytic_circular(c);
    const double R = c.side_l / 2.0;
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double rr = R * (i + 0.5) / n;
        sum += (radial_temperature(c, rr) - c.T0) * rr;
    }
    const double avg = 2.0 * sum * (R / n) / (R * R);
    EXPECT_NEAR((r.T_avg - c.T0) / avg, 1.0, 1e-6);
    EXPECT_LT(r.T_avg_printed, c.T0);
}

TEST(Thermal, SquarePrefactorWideBeam) {
    EXPECT_NEAR(*fdm_square(with_ratio(0.3), 201).f_g, 1.075, 0.01);
}

TEST(Thermal, SquarePrefactorNarrowBeam) {
    EXPECT_NEAR(*fdm_square(with_ratio(0.01), 201).f_g, 1.017, 0.01);
}

TEST(Thermal, CircularGridReproducesClosedForm) {
    for (double ratio : {0.03, 0.3}) {
        const ThermalConfig c = with_ratio(ratio);
        const double fdm = fdm_solve(c, 201, MembraneShape::Circle).center();
        EXPECT_NEAR(fdm / analytic_circular(c).delta_T, 1.0, 0.005);
    }
}

TEST(Thermal, CircularGridConvergesWithRefinement) {
    const ThermalConfig c = with_ratio(0.1);
    const double exact = analytic_circular(c).delta_T;
    const double coarse = std::abs(fdm_solve(c, 101, MembraneShape::Circle).center() / exact - 1.0);
    const double fine = std::abs(fdm_solve(c, 201, MembraneShape::Circle).center() / exact - 1.0);
    EXPECT_LT(fine, coarse);
}

TEST(Thermal, PrefactorMonotoneInBeamSize) {
    double prev = 0.0;
    for (double ratio : {0.01, 0.03, 0.1, 0.2, 0.3}) {
        const double fg = *fdm_square(with_ratio(ratio), 201).f_g;
        EXPECT_GT(fg, prev);
        prev = fg;
    }
}

TEST(Thermal, SquareFieldSymmetric) {
    const ThermalField f = fdm_solve(with_ratio(0.1), 51, MembraneShape::Square);
    for (std::size_t i = 0; i < f.n; ++i) {
        for (std::size_t j = 0; j < f.n; ++j) {
            EXPECT_NEAR(f.at(i, j), f.at(j, i), 1e-9 * f.center());
            EXPECT_NEAR(f.at(i, j), f.at(f.n - 1 - i, j), 1e-9 * f.center());
        }
    }
    EXPECT_EQ(f.at(0, f.n / 2), 0.0);
}

TEST(Thermal, IterationCapRaises) {
    EXPECT_THROW(fdm_solve(with_ratio(0.1), 101, MembraneShape::Square, 3), ConvergenceError);
}

TEST(Thermal, RejectsClippedBeamAndCoarseGrid) {
    EXPECT_THROW(analytic_circular(with_ratio(0.31)), ValidationError);
    EXPECT_NO_THROW(analytic_circular(with_ratio(0.3)));
    EXPECT_THROW(fdm_square(with_ratio(0.1), 101), ValidationError);
    EXPECT_THROW(fdm_solve(with_ratio(0.1), 100, MembraneShape::Square), ValidationError);
}

TEST(Thermal, ZeroPowerGivesNoRise) {
    ThermalConfig c = thermal_config(table1_system());
    c.power_P = 0.0;
    const ThermalResult r = analytic_circular(c);
    EXPECT_EQ(r.delta_T, 0.0);
    EXPECT_EQ(r.T_avg, c.T0);
    EXPECT_EQ(fdm_solve(c, 51, MembraneShape::Square).center(), 0.0);
}
