#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "hybridmech/constants.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/slab.hpp"

namespace hybridmech {

enum class Geometry { MembraneInMiddle, MovableMirror };

struct Placement {
    enum class Kind { OnSlope, AtPosition };
    Kind kind = Kind::OnSlope;
    double ell = 0.0;  // m, only meaningful for AtPosition

    static Placement on_slope() { return {}; }
    static Placement at_position(double ell) { return {Kind::AtPosition, ell}; }

    bool operator==(const Placement&) const = default;
};

struct MembraneParams {
    double omega_m = 0.0;  // rad/s
    double mass_M = 0.0;   // kg
    double Q_m = 0.0;      // may be +inf for a lossless idealization
    double T0 = 0.0;       // K
    double n_m = 0.0;
    double d_m = 0.0;      // m
    double side_l = 0.0;   // m
    double abs2 = 0.0;     // power absorption
    std::optional<double> r_m_override;
    Placement placement;
    double kappa_th = 0.0;  // W/(m K)
    std::optional<double> K_th_override;  // W/K

    bool operator==(const MembraneParams&) const = default;
};

struct AtomParams {
    double omega_at = 0.0;  // rad/s
    double mass_m = 0.0;    // kg
    double N = 0.0;
    double delta = 0.0;     // rad/s, laser minus transition frequency
    double mu = 0.0;        // C m
    double gamma_se = 0.0;  // rad/s
    double lambda_L = 0.0;  // m
    std::optional<double> omega_L_listed;  // rad/s, cross-checked against lambda_L

    bool operator==(const AtomParams&) const = default;
};

struct CavityParams {
    double finesse = 0.0;
    double length_L = 0.0;        // m
    double mode_area = 0.0;       // m^2
    double power_P = 0.0;         // W, incident running-wave power
    double waist_membrane = 0.0;  // m
    Geometry geometry = Geometry::MembraneInMiddle;

    bool operator==(const CavityParams&) const = default;
};

struct DerivedQuantities {
    double l_m = 0.0;      // m
    double l_at = 0.0;     // m
    double k_L = 0.0;      // 1/m
    double omega_L = 0.0;  // rad/s
    double alpha = 0.0;    // sqrt(photons/s)
    double V0 = 0.0;       // J, from trap-frequency matching
    double kappa = 0.0;    // rad/s, half linewidth
    double E_wL2 = 0.0;    // (V/m)^2
    double gamma_m = 0.0;  // rad/s
    double abs_r_m = 0.0;  // |r_m| actually used downstream
    // End mirror modelled as a quarter-wave slab reproducing the finesse.
    double mirror_abs_r = 0.0;
    double mirror_n = 0.0;
    double mirror_d = 0.0;  // m
};

class SystemParams;
SystemParams build_system(const MembraneParams&, const AtomParams&, const CavityParams&,
                          const PhysicalConstants& = kCodata);

/// Validated, immutable parameter record. Obtain one through build_system().
class SystemParams {
public:
    const MembraneParams& membrane() const { return membrane_; }
    const AtomParams& atoms() const { return atoms_; }
    const CavityParams& cavity() const { return cavity_; }
    const PhysicalConstants& constants() const { return constants_; }
    const DerivedQuantities& derived() const { return derived_; }

private:
    friend SystemParams build_system(const MembraneParams&, const AtomParams&,
                                     const CavityParams&, const PhysicalConstants&);
    SystemParams() = default;

    MembraneParams membrane_;
    AtomParams atoms_;
    CavityParams cavity_;
    PhysicalConstants constants_;
    DerivedQuantities derived_;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("invalid parameter: " + what);
}

inline bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace detail

/// Mirror amplitude reflectivity giving finesse F = pi sqrt|r| / (1 - |r|).
inline double mirror_reflectivity_for_finesse(double finesse) {
    const double s = (-pi + std::sqrt(pi * pi + 4.0 * finesse * finesse)) / (2.0 * finesse);
    return s * s;
}

inline SystemParams build_system(const MembraneParams& mem, const AtomParams& at,
                                 const CavityParams& cav, const PhysicalConstants& pc) {
    using detail::finite_positive;
    using detail::require;

    require(finite_positive(pc.hbar) && finite_positive(pc.k_B) && finite_positive(pc.c) &&
                finite_positive(pc.epsilon_0),
            "physical constants must be positive");

    require(finite_positive(mem.omega_m), "membrane.omega_m > 0");
    require(finite_positive(mem.mass_M), "membrane.mass_M > 0");
    require(mem.Q_m > 0.0 && !std::isnan(mem.Q_m), "membrane.Q_m > 0");
    require(finite_positive(mem.T0), "membrane.T0 > 0");
    require(std::isfinite(mem.n_m) && mem.n_m > 1.0, "membrane.n_m > 1");
    require(finite_positive(mem.d_m), "membrane.d_m > 0");
    require(finite_positive(mem.side_l), "membrane.side_l > 0");
    require(mem.abs2 >= 0.0 && mem.abs2 < 1.0, "0 <= membrane.abs2 < 1");
    if (mem.r_m_override) {
        require(*mem.r_m_override > 0.0 && *mem.r_m_override < 1.0,
                "0 < membrane.r_m_override < 1");
    }
    require(finite_positive(mem.kappa_th), "membrane.kappa_th > 0");
    if (mem.K_th_override) {
        require(finite_positive(*mem.K_th_override), "membrane.K_th_override > 0");
    }

    require(finite_positive(at.omega_at), "atoms.omega_at > 0");
    require(finite_positive(at.mass_m), "atoms.mass_m > 0");
    require(finite_positive(at.N), "atoms.N > 0");
    require(std::isfinite(at.delta) && at.delta != 0.0, "atoms.delta != 0");
    require(finite_positive(at.mu), "atoms.mu > 0");
    require(finite_positive(at.gamma_se), "atoms.gamma_se > 0");
    require(finite_positive(at.lambda_L), "atoms.lambda_L > 0");

    require(std::isfinite(cav.finesse) && cav.finesse >= 1.0, "cavity.finesse >= 1");
    require(finite_positive(cav.length_L), "cavity.length_L > 0");
    require(finite_positive(cav.mode_area), "cavity.mode_area > 0");
    require(finite_positive(cav.power_P), "cavity.power_P > 0");
    require(finite_positive(cav.waist_membrane), "cavity.waist_membrane > 0");

    if (mem.placement.kind == Placement::Kind::AtPosition) {
        require(mem.placement.ell > 0.0 && mem.placement.ell + mem.d_m < cav.length_L,
                "membrane.placement.ell inside the cavity (0 < ell, ell + d_m < L)");
    }

    SystemParams sys;
    sys.membrane_ = mem;
    sys.atoms_ = at;
    sys.cavity_ = cav;
    sys.constants_ = pc;

    DerivedQuantities& d = sys.derived_;
    d.l_m = std::sqrt(pc.hbar / (mem.mass_M * mem.omega_m));
    d.l_at = std::sqrt(pc.hbar / (at.mass_m * at.omega_at));
    d.k_L = two_pi / at.lambda_L;
    d.omega_L = pc.c * d.k_L;
    if (at.omega_L_listed) {
        require(std::abs(*at.omega_L_listed / d.omega_L - 1.0) <= 5e-3,
                "atoms.omega_L_listed consistent with 2 pi c / lambda_L to 0.5%");
    }
    d.alpha = std::sqrt(two_pi * cav.power_P / (pc.hbar * d.omega_L));
    d.V0 = at.mass_m * sqr(at.omega_at) / (2.0 * sqr(d.k_L));
    d.kappa = pi * pc.c / (2.0 * cav.finesse * cav.length_L);
    d.E_wL2 = pc.hbar * d.omega_L / (pi * pc.epsilon_0 * pc.c * cav.mode_area);
    d.gamma_m = mem.omega_m / mem.Q_m;
    d.abs_r_m = mem.r_m_override ? *mem.r_m_override
                                 : std::abs(slab(mem.n_m, mem.d_m, d.k_L).r);
    d.mirror_abs_r = mirror_reflectivity_for_finesse(cav.finesse);
    d.mirror_n = quarter_wave_index_for(d.mirror_abs_r);
    d.mirror_d = pi / (2.0 * d.k_L * d.mirror_n);
    return sys;
}

/// Lattice depth produced by the configured power: mu^2 E^2 alpha^2 / (hbar delta).
inline double lattice_depth_from_power(const SystemParams& sys) {
    const auto& d = sys.derived();
    return sqr(sys.atoms().mu) * d.E_wL2 * sqr(d.alpha) /
           (sys.constants().hbar * sys.atoms().delta);
}

/// Trap frequency sqrt(2 V0 k_L^2 / m) for a given lattice depth.
inline double trap_frequency(double V0, double k_L, double mass_m) {
    return std::sqrt(2.0 * V0 * sqr(k_L) / mass_m);
}

/// Input power that makes the lattice trap frequency equal atoms.omega_at.
/// The cavity's power_P field is ignored.
inline double required_power(const AtomParams& at, const CavityParams& cav,
                             const PhysicalConstants& pc = kCodata) {
    if (!(at.delta > 0.0)) {
        throw DetuningSignError("required_power: blue detuning (delta > 0) required");
    }
    const double k_L = two_pi / at.lambda_L;
    return at.mass_m * sqr(at.omega_at) * pc.epsilon_0 * pc.c * cav.mode_area * pc.hbar *
           at.delta / (4.0 * sqr(k_L) * sqr(at.mu));
}

// Reference operating point (SiN membrane, 87Rb ensemble, 780 nm lattice).

inline MembraneParams table1_membrane() {
    MembraneParams m;
    m.omega_m = two_pi * 400e3;
    m.mass_M = 3.6e-11;
    m.Q_m = 1e7;
    m.T0 = 1.6;
    m.n_m = 2.0;
    m.d_m = 50e-9;
    m.side_l = 1e-3;
    m.abs2 = 1e-6;
    m.r_m_override = 0.47;
    m.placement = Placement::on_slope();
    // Chosen so that the circular-membrane link at a 100 um waist equals 4e-7 W/K.
    m.kappa_th = 2.6858;
    m.K_th_override = 4e-7;
    return m;
}

inline AtomParams table1_atoms() {
    AtomParams a;
    a.omega_at = two_pi * 400e3;
    a.mass_m = 1.44e-25;
    a.N = 1e8;
    a.delta = two_pi * 1.0e9;
    a.mu = 1.5e-29;
    a.gamma_se = two_pi * 6.07e6;
    a.lambda_L = 780e-9;
    a.omega_L_listed = two_pi * 384e12;
    return a;
}

inline CavityParams table1_cavity() {
    CavityParams c;
    c.finesse = 450.0;
    c.length_L = 1e-2;
    c.mode_area = 9.6e-8;
    c.power_P = 2.8e-3;
    c.waist_membrane = 100e-6;
    c.geometry = Geometry::MembraneInMiddle;
    return c;
}

inline SystemParams table1_system() {
    return build_system(table1_membrane(), table1_atoms(), table1_cavity());
}

}  // namespace hybridmech
