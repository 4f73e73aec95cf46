#pragma once

#include <cmath>
#include <optional>

#include "hybridmech/constants.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/optics.hpp"
#include "hybridmech/params.hpp"
#include "hybridmech/thermal.hpp"

namespace hybridmech {

/// Coherent and incoherent rates of the effective two-oscillator model, in s^-1 unless
/// noted. g_m and g_at carry units of s^-1/2 (they multiply a frequency-integrated field).
struct RateSet {
    double omega_m = 0.0;
    double omega_at = 0.0;
    double g_m = 0.0;
    double g_at = 0.0;
    double g = 0.0;
    double gamma_m = 0.0;
    double gamma_m_diff = 0.0;
    double gamma_at_diff = 0.0;
    double N_m_bar = 0.0;
    double gamma_m_th = 0.0;
    double delta_T = 0.0;  // K
    double P_abs = 0.0;    // W
    double K_th = 0.0;     // W/K

    /// Total decoherence entering the strong-coupling comparison.
    double gamma_total() const { return gamma_at_diff + gamma_m_diff + gamma_m_th; }
};

/// Enhancement factor 2F/pi of the intracavity intensity on resonance.
inline double cavity_enhancement(double finesse) { return 2.0 * finesse / pi; }

/// Membrane-field coupling. On the slope this is alpha k_L l_m / sqrt(pi) |r_m| (2F/pi);
/// at an explicit position it uses |sin(2 k_L ell)| and the exact |T|^2 at the resonance
/// nearest the laser.
inline double coupling_gm(const SystemParams& sys) {
    const auto& d = sys.derived();
    const double prefactor = d.alpha * d.k_L * d.l_m / std::sqrt(pi) * d.abs_r_m;
    const auto& pl = sys.membrane().placement;
    if (pl.kind == Placement::Kind::OnSlope) {
        return prefactor * cavity_enhancement(sys.cavity().finesse);
    }
    const double slope = std::abs(std::sin(2.0 * d.k_L * pl.ell));
    if (slope == 0.0) return 0.0;
    const CavityOptics o = cavity_optics(sys);
    const double omega_res = find_resonance(o, d.kappa, d.omega_L);
    return prefactor * slope * std::norm(cavity_response(o, omega_res).T_w);
}

/// Movable end-mirror variant: 2 alpha k_L l_m F / pi^(3/2).
inline double coupling_gm_mirror(const SystemParams& sys) {
    if (sys.cavity().geometry != Geometry::MovableMirror) {
        throw ValidationError("coupling_gm_mirror: cavity.geometry must be movable_mirror");
    }
    const auto& d = sys.derived();
    return 2.0 * d.alpha * d.k_L * d.l_m * sys.cavity().finesse / std::pow(pi, 1.5);
}

inline double coupling_gat(const SystemParams& sys) {
    const auto& d = sys.derived();
    return sys.atoms().omega_at * std::sqrt(pi) * std::sqrt(sys.atoms().N) /
           (2.0 * d.alpha * d.k_L * d.l_at);
}

/// Momentum diffusion of atoms in a 3D standing wave, with V0 from trap matching.
inline double atomic_diffusion(const SystemParams& sys) {
    const auto& d = sys.derived();
    return sqr(d.k_L * d.l_at) * sys.atoms().gamma_se * d.V0 /
           (sys.constants().hbar * std::abs(sys.atoms().delta));
}

inline RateSet full_rates(const SystemParams& sys, std::optional<double> K_th = std::nullopt) {
    const auto& mem = sys.membrane();
    const auto& cav = sys.cavity();
    const auto& pc = sys.constants();

    RateSet r;
    r.omega_m = mem.omega_m;
    r.omega_at = sys.atoms().omega_at;
    r.g_m = cav.geometry == Geometry::MovableMirror ? coupling_gm_mirror(sys) : coupling_gm(sys);
    r.g_at = coupling_gat(sys);
    r.g = 2.0 * r.g_at * r.g_m;
    r.gamma_m = sys.derived().gamma_m;
    r.gamma_m_diff = 2.0 * sqr(r.g_m);
    r.gamma_at_diff = atomic_diffusion(sys);

    r.K_th = K_th ? *K_th : thermal_link(sys);
    if (!(r.K_th > 0.0)) throw ValidationError("full_rates: K_th must be positive");
    r.P_abs = absorbed_power(thermal_config(sys));
    r.delta_T = r.P_abs / r.K_th;
    r.N_m_bar = pc.k_B * (mem.T0 + r.delta_T) / (pc.hbar * mem.omega_m);
    r.gamma_m_th = r.gamma_m * r.N_m_bar;
    return r;
}

struct ScalingEstimate {
    double g_factorized = 0.0;
    double g_full = 0.0;
    double relative_difference = 0.0;
};

/// Coupling written as omega_at sqrt(m omega_at / (M omega_m)) |r_m| sqrt(N) (2F/pi),
/// compared against the product 2 g_at g_m. Requires the resonant on-slope membrane setup.
inline ScalingEstimate scaling_estimate(const SystemParams& sys) {
    const double w_at = sys.atoms().omega_at;
    const double w_m = sys.membrane().omega_m;
    if (std::abs(w_at / w_m - 1.0) > 1e-6) {
        throw ValidationError("scaling_estimate: requires omega_at == omega_m");
    }
    if (sys.cavity().geometry != Geometry::MembraneInMiddle ||
        sys.membrane().placement.kind != Placement::Kind::OnSlope) {
        throw ValidationError("scaling_estimate: requires an on-slope membrane");
    }
    ScalingEstimate e;
    e.g_factorized = w_at * std::sqrt(sys.atoms().mass_m * w_at / (sys.membrane().mass_M * w_m)) *
                     sys.derived().abs_r_m * std::sqrt(sys.atoms().N) *
                     cavity_enhancement(sys.cavity().finesse);
    e.g_full = full_rates(sys).g;
    e.relative_difference = std::abs(e.g_factorized / e.g_full - 1.0);
    return e;
}

}  // namespace hybridmech
