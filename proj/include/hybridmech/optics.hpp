#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hybridmech/constants.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/params.hpp"
#include "hybridmech/slab.hpp"

namespace hybridmech {

/// One-dimensional refractive-index layout: perfect mirror at z = 0, membrane slab at
/// [ell, ell + d_m], end-mirror slab at [L, L + mirror_d]. With n_m == 1 or the
/// movable-mirror geometry the membrane is absent.
struct CavityOptics {
    double n_m = 1.0;
    double d_m = 0.0;
    double ell = 0.0;
    double mirror_n = 1.0;
    double mirror_d = 0.0;
    double length_L = 0.0;
    Geometry geometry = Geometry::MembraneInMiddle;
    double c = kCodata.c;

    bool has_membrane() const { return geometry == Geometry::MembraneInMiddle && n_m > 1.0; }
};

struct CavityResponse {
    cplx A_w;  // field factor between membrane and end mirror
    cplx T_w;  // field factor outside the cavity
};

/// Field u(z) and ubar(z) = u'(z) / (i k).
struct ModeAmplitude {
    cplx u;
    cplx ubar;
};

/// Membrane position for on-slope placement: sin(2 k_L ell) = 1, closest to L/2.
inline double slope_position(double k_L, double length_L) {
    const double j = std::round((k_L * length_L / 2.0 - pi / 4.0) / pi);
    return (pi / 4.0 + pi * j) / k_L;
}

inline double membrane_position(const SystemParams& sys) {
    const auto& pl = sys.membrane().placement;
    if (pl.kind == Placement::Kind::AtPosition) return pl.ell;
    return slope_position(sys.derived().k_L, sys.cavity().length_L);
}

inline CavityOptics cavity_optics(const SystemParams& sys) {
    CavityOptics o;
    o.n_m = sys.membrane().n_m;
    o.d_m = sys.membrane().d_m;
    o.ell = membrane_position(sys);
    o.mirror_n = sys.derived().mirror_n;
    o.mirror_d = sys.derived().mirror_d;
    o.length_L = sys.cavity().length_L;
    o.geometry = sys.cavity().geometry;
    o.c = sys.constants().c;
    return o;
}

namespace detail {

constexpr double kDegenerateDenominator = 1e-12;

inline cplx checked_inverse(cplx denom, const char* where) {
    if (std::abs(denom) < kDegenerateDenominator) {
        throw DegenerateCavityError(std::string(where) + ": vanishing resonance denominator");
    }
    return 1.0 / denom;
}

inline cplx expi(double phase) { return std::polar(1.0, phase); }

}  // namespace detail

inline CavityResponse cavity_response(const CavityOptics& o, double omega) {
    if (!(omega > 0.0)) throw ValidationError("cavity_response: omega must be positive");
    const double k = omega / o.c;

    cplx A{1.0, 0.0};
    if (o.has_membrane()) {
        const SlabResponse mem = slab(o.n_m, o.d_m, k);
        A = mem.t * detail::expi(-k * o.d_m) *
            detail::checked_inverse(1.0 - mem.r * detail::expi(2.0 * k * o.ell),
                                    "cavity_response(membrane)");
    }
    const double phi_prime = std::arg(A);
    const SlabResponse mir = slab(o.mirror_n, o.mirror_d, k);
    const cplx T = A * mir.t * detail::expi(-k * o.mirror_d) *
                   detail::checked_inverse(
                       1.0 - mir.r * detail::expi(2.0 * (k * o.length_L + phi_prime)),
                       "cavity_response(end mirror)");
    return {A, T};
}

inline CavityResponse cavity_response(const SystemParams& sys, double omega) {
    return cavity_response(cavity_optics(sys), omega);
}

/// Piecewise mode function. Points strictly inside a slab are out of domain.
inline ModeAmplitude mode_function(const CavityOptics& o, double omega, double z) {
    if (z < 0.0) throw OutOfDomainError("mode_function: z must be >= 0");
    const double k = omega / o.c;
    const CavityResponse resp = cavity_response(o, omega);
    const cplx T = resp.T_w;
    const cplx e_plus = detail::expi(k * z);
    const cplx e_minus = detail::expi(-k * z);
    const cplx half_over_i{0.0, -0.5};

    const double mirror_end = o.length_L + o.mirror_d;
    if (z > o.length_L && z < mirror_end) {
        throw OutOfDomainError("mode_function: z inside the end-mirror slab");
    }
    if (z >= mirror_end) {
        const cplx ratio = T / std::conj(T);
        return {half_over_i * (ratio * e_plus - e_minus), half_over_i * (ratio * e_plus + e_minus)};
    }
    if (!o.has_membrane() || z <= o.ell) {
        return {half_over_i * T * (e_plus - e_minus), half_over_i * T * (e_plus + e_minus)};
    }
    if (z < o.ell + o.d_m) {
        throw OutOfDomainError("mode_function: z inside the membrane slab");
    }
    const cplx A = resp.A_w;
    return {half_over_i * T * (e_plus / std::conj(A) - e_minus / A),
            half_over_i * T * (e_plus / std::conj(A) + e_minus / A)};
}

inline ModeAmplitude mode_function(const SystemParams& sys, double omega, double z) {
    return mode_function(cavity_optics(sys), omega, z);
}

/// Cavity resonance index and frequency nearest to omega for an empty cavity.
inline double nearest_empty_resonance(double omega, double length_L, double c = kCodata.c) {
    const double fsr = pi * c / length_L;
    return std::max(1.0, std::round(omega / fsr)) * fsr;
}

inline double lorentzian_T2(double finesse, double kappa, double omega, double omega_nu) {
    const double detuning = omega - omega_nu;
    return (2.0 * finesse / pi) * sqr(kappa) / (sqr(kappa) + sqr(detuning));
}

inline double lorentzian_T2(const SystemParams& sys, double omega) {
    const double omega_nu = nearest_empty_resonance(omega, sys.cavity().length_L,
                                                    sys.constants().c);
    return lorentzian_T2(sys.cavity().finesse, sys.derived().kappa, omega, omega_nu);
}

/// Locates the |T|^2 maximum nearest to omega_guess: coarse scan over one free spectral
/// range at kappa/20 spacing, then golden-section refinement to kappa * 1e-6.
inline double find_resonance(const CavityOptics& o, double kappa, double omega_guess) {
    const double fsr = pi * o.c / o.length_L;
    const double step = kappa / 20.0;
    const auto points = static_cast<long>(std::ceil(fsr / step));
    const double start = omega_guess - 0.5 * fsr;
    auto t2 = [&](double w) { return std::norm(cavity_response(o, w).T_w); };

    double best_w = omega_guess;
    double best = -1.0;
    for (long i = 0; i <= points; ++i) {
        const double w = start + static_cast<double>(i) * step;
        const double v = t2(w);
        if (v > best || (v == best && std::abs(w - omega_guess) < std::abs(best_w - omega_guess))) {
            best = v;
            best_w = w;
        }
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_w - step;
    double b = best_w + step;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = t2(x1);
    double f2 = t2(x2);
    const double tol = kappa * 1e-6;
    while (b - a > tol) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = t2(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = t2(x2);
        }
    }
    return 0.5 * (a + b);
}

inline double find_resonance(const SystemParams& sys) {
    return find_resonance(cavity_optics(sys), sys.derived().kappa, sys.derived().omega_L);
}

/// d arg(T)/d omega at `omega` by a central difference of the phase ratio, which is
/// branch-safe.
inline double phase_slope_at(const CavityOptics& o, double kappa, double omega) {
    const double h = kappa * 1e-3;
    const cplx lo = cavity_response(o, omega - h).T_w;
    const cplx hi = cavity_response(o, omega + h).T_w;
    return std::arg(hi / lo) / (2.0 * h);
}

/// Phase slope with the laser tuned onto the cavity resonance nearest omega_L.
inline double phase_slope(const SystemParams& sys) {
    const CavityOptics o = cavity_optics(sys);
    const double omega_res = find_resonance(o, sys.derived().kappa, sys.derived().omega_L);
    return phase_slope_at(o, sys.derived().kappa, omega_res);
}

struct ScanPoint {
    double omega;
    cplx T;
    double abs_T2;
    double phase;  // unwrapped along the scan
    double lorentzian_T2;
};

/// Frequency scan with nearest-branch phase unwrapping. Grid spacing above kappa/20
/// would make the unwrapping unreliable and is rejected.
inline std::vector<ScanPoint> scan(const SystemParams& sys, double omega_min, double omega_max,
                                   std::size_t points) {
    if (points < 2 || !(omega_max > omega_min) || !(omega_min > 0.0)) {
        throw ValidationError("optics scan: need points >= 2 and 0 < omega_min < omega_max");
    }
    const double kappa = sys.derived().kappa;
    const double step = (omega_max - omega_min) / static_cast<double>(points - 1);
    if (step > kappa / 20.0) {
        throw ValidationError("optics scan: frequency step exceeds kappa/20");
    }
    const CavityOptics o = cavity_optics(sys);
    std::vector<ScanPoint> out;
    out.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double w = omega_min + static_cast<double>(i) * step;
        const cplx T = cavity_response(o, w).T_w;
        double phase = std::arg(T);
        if (!out.empty()) {
            phase = out.back().phase + std::arg(T / out.back().T);
        }
        out.push_back({w, T, std::norm(T), phase, lorentzian_T2(sys, w)});
    }
    return out;
}

}  // namespace hybridmech
