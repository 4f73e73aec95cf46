#include <gtest/gtest.h>

#include <cmath>

#include "hybridmech.hpp"

using namespace hybridmech;

namespace {

CavityOptics empty_cavity(const SystemParams& sys) {
    CavityOptics o = cavity_optics(sys);
    o.n_m = 1.0;
    return o;
}

}  // namespace

TEST(Slab, LosslessEnergyConservation) {
    for (double n : {1.0, 1.5, 2.0, 3.5}) {
        for (double d : {10e-9, 50e-9, 333e-9}) {
            const SlabResponse s = slab(n, d, two_pi / 780e-9);
            EXPECT_NEAR(std::norm(s.r) + std::norm(s.t), 1.0, 1e-12);
        }
    }
}

TEST(Slab, MembraneReflectivity) {
    const SlabResponse s = slab(2.0, 50e-9, two_pi / 780e-9);
    EXPECT_NEAR(std::abs(s.r), 0.476, 0.005);
}

TEST(Slab, IndexOneIsTransparent) {
    const SlabResponse s = slab(1.0, 50e-9, two_pi / 780e-9);
    EXPECT_NEAR(std::abs(s.r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.t), 1.0, 1e-15);
}

TEST(Slab, HalfWaveSlabIsTransparent) {
    const double k = two_pi / 780e-9;
    const double n = 2.0;
    const SlabResponse s = slab(n, pi / (n * k), k);
    EXPECT_NEAR(std::abs(s.r), 0.0, 1e-12);
}

TEST(Slab, QuarterWaveIndexInverse) {
    const double k = two_pi / 780e-9;
    for (double r : {0.3, 0.9, 0.99}) {
        const double n = quarter_wave_index_for(r);
        EXPECT_NEAR(std::abs(slab(n, pi / (2.0 * k * n), k).r), r, 1e-12);
    }
}

TEST(Slab, RejectsUnphysicalInput) {
    EXPECT_THROW(slab(0.5, 50e-9, 1e7), ValidationError);
    EXPECT_THROW(slab(2.0, 0.0, 1e7), ValidationError);
}

TEST(Optics, LorentzianAgreesNearResonance) {
    const SystemParams sys = table1_system();
    const CavityOptics o = empty_cavity(sys);
    const double kappa = sys.derived().kappa;
    const double res = find_resonance(o, kappa, sys.derived().omega_L);
    double near = 0.0, wide = 0.0;
    for (int i = -100; i <= 100; ++i) {
        const double detuning = kappa * i / 100.0;
        const double exact = std::norm(cavity_response(o, res + detuning).T_w);
        const double approx = lorentzian_T2(450.0, kappa, res + detuning, res);
        const double rel = std::abs(exact / approx - 1.0);
        if (std::abs(i) <= 10) near = std::max(near, rel);
        wide = std::max(wide, rel);
    }
    EXPECT_LE(near, 0.01);
    EXPECT_LE(wide, 0.05);
}

TEST(Optics, EmptyCavityPeakIsEnhancement) {
    const SystemParams sys = table1_system();
    const CavityOptics o = empty_cavity(sys);
    const double res = find_resonance(o, sys.derived().kappa, sys.derived().omega_L);
    EXPECT_NEAR(std::norm(cavity_response(o, res).T_w) / (2.0 * 450.0 / pi), 1.0, 0.01);
}

TEST(Optics, PhaseSlopeIsInverseLinewidth) {
    const SystemParams sys = table1_system();
    const CavityOptics o = empty_cavity(sys);
    const double kappa = sys.derived().kappa;
    const double res = find_resonance(o, kappa, sys.derived().omega_L);
    EXPECT_NEAR(phase_slope_at(o, kappa, res) * kappa, 1.0, 0.05);
}

TEST(Optics, FindResonanceNearEmptyResonance) {
    const SystemParams sys = table1_system();
    const CavityOptics o = empty_cavity(sys);
    const double kappa = sys.derived().kappa;
    const double res = find_resonance(o, kappa, sys.derived().omega_L);
    const double guess = nearest_empty_resonance(sys.derived().omega_L, sys.cavity().length_L);
    EXPECT_LT(std::abs(res - guess), 0.01 * kappa);
}

TEST(Optics, ModeFunctionNodeAtFixedMirror) {
    const SystemParams sys = table1_system();
    const CavityOptics o = cavity_optics(sys);
    const double omega = find_resonance(o, sys.derived().kappa, sys.derived().omega_L);
    EXPECT_NEAR(std::abs(mode_function(o, omega, 0.0).u), 0.0, 1e-12);
    EXPECT_GT(std::abs(mode_function(o, omega, o.ell).u), 0.0);
    EXPECT_GT(std::abs(mode_function(o, omega, o.ell + o.d_m).u), 0.0);
}

TEST(Optics, ModeFunctionDomain) {
    const SystemParams sys = table1_system();
    const CavityOptics o = cavity_optics(sys);
    const double omega = sys.derived().omega_L;
    EXPECT_THROW(mode_function(o, omega, -1e-6), OutOfDomainError);
    EXPECT_THROW(mode_function(o, omega, o.ell + 0.5 * o.d_m), OutOfDomainError);
    EXPECT_THROW(mode_function(o, omega, o.length_L + 0.5 * o.mirror_d), OutOfDomainError);
    EXPECT_NO_THROW(mode_function(o, omega, o.length_L + 2.0 * o.mirror_d));
}

TEST(Optics, OutsideFieldHasUnitAmplitude) {
    const SystemParams sys = table1_system();
    const CavityOptics o = cavity_optics(sys);
    const double omega = sys.derived().omega_L;
    for (double dz : {1e-6, 1.3e-6, 5e-4}) {
        const ModeAmplitude m = mode_function(o, omega, o.length_L + o.mirror_d + dz);
        EXPECT_NEAR(std::norm(m.u) + std::norm(m.ubar), 1.0, 1e-9);
    }
}

TEST(Optics, SlopePositionMaximizesGradient) {
    const SystemParams sys = table1_system();
    const double ell = membrane_position(sys);
    EXPECT_NEAR(std::sin(2.0 * sys.derived().k_L * ell), 1.0, 1e-6);
    EXPECT_LT(std::abs(ell - sys.cavity().length_L / 2.0), 780e-9);
}

TEST(Optics, ScanPhaseIsContinuous) {
    const SystemParams sys = table1_system();
    const double kappa = sys.derived().kappa;
    const double res = find_resonance(sys);
    const auto pts = scan(sys, res - 3.0 * kappa, res + 3.0 * kappa, 241);
    ASSERT_EQ(pts.size(), 241u);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        EXPECT_LT(std::abs(pts[i].phase - pts[i - 1].phase), 0.5);
    }
    EXPECT_GT(pts.back().phase - pts.front().phase, 0.0);
}

TEST(Optics, ScanRejectsCoarseGrid) {
    const SystemParams sys = table1_system();
    const double kappa = sys.derived().kappa;
    const double res = find_resonance(sys);
    EXPECT_THROW(scan(sys, res - 3.0 * kappa, res + 3.0 * kappa, 50), ValidationError);
}

TEST(Optics, MovableMirrorHasNoMembrane) {
    auto cav = table1_cavity();
    cav.geometry = Geometry::MovableMirror;
    const SystemParams sys = build_system(table1_membrane(), table1_atoms(), cav);
    const CavityOptics o = cavity_optics(sys);
    EXPECT_FALSE(o.has_membrane());
    EXPECT_EQ(cavity_response(o, sys.derived().omega_L).A_w, cplx(1.0, 0.0));
}
