#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hybridmech/constants.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/params.hpp"

namespace hybridmech {

struct ThermalConfig {
    double kappa_th = 0.0;  // W/(m K)
    double d_m = 0.0;       // m
    double side_l = 0.0;    // m
    double w_m = 0.0;       // m, beam e^-2 radius on the membrane
    double abs2 = 0.0;
    double finesse = 0.0;
    double power_P = 0.0;   // W
    double T0 = 0.0;        // K
};

struct ThermalResult {
    double P_abs = 0.0;    // W
    double delta_T = 0.0;  // K, center minus frame
    double K_th = 0.0;     // W/K
    double T_avg = 0.0;    // K, area average of the radial profile
    // Closed form as commonly quoted, [1 - 2 (l/w)^2]; kept for comparison only.
    double T_avg_printed = 0.0;
    std::optional<double> f_g;
};

// Beams wider than 0.3 l clip on the frame.
constexpr double kMaxWaistFraction = 0.3;

inline void validate(const ThermalConfig& c) {
    detail::require(detail::finite_positive(c.kappa_th), "thermal.kappa_th > 0");
    detail::require(detail::finite_positive(c.d_m), "thermal.d_m > 0");
    detail::require(detail::finite_positive(c.side_l), "thermal.side_l > 0");
    detail::require(detail::finite_positive(c.w_m), "thermal.w_m > 0");
    detail::require(c.w_m <= kMaxWaistFraction * c.side_l * (1.0 + 1e-12),
                    "thermal.w_m <= 0.3 side_l");
    detail::require(c.abs2 >= 0.0 && c.abs2 < 1.0, "0 <= thermal.abs2 < 1");
    detail::require(std::isfinite(c.finesse) && c.finesse >= 1.0, "thermal.finesse >= 1");
    detail::require(c.power_P >= 0.0 && std::isfinite(c.power_P), "thermal.power_P >= 0");
    detail::require(detail::finite_positive(c.T0), "thermal.T0 > 0");
}

inline ThermalConfig thermal_config(const SystemParams& sys) {
    ThermalConfig c;
    c.kappa_th = sys.membrane().kappa_th;
    c.d_m = sys.membrane().d_m;
    c.side_l = sys.membrane().side_l;
    c.w_m = sys.cavity().waist_membrane;
    c.abs2 = sys.membrane().abs2;
    c.finesse = sys.cavity().finesse;
    c.power_P = sys.cavity().power_P;
    c.T0 = sys.membrane().T0;
    return c;
}

/// Absorbed power on the intensity slope: half the standing-wave peak.
inline double absorbed_power(const ThermalConfig& c) {
    return c.abs2 * 4.0 * c.finesse * c.power_P / pi;
}

/// Volumetric heating inside the beam disc.
inline double source_density(const ThermalConfig& c) {
    return absorbed_power(c) / (pi * sqr(c.w_m) * c.d_m);
}

/// Temperature profile of a circular membrane of diameter l with a uniform disc source.
inline double radial_temperature(const ThermalConfig& c, double r) {
    const double q = source_density(c);
    const double w = c.w_m;
    const double R = c.side_l / 2.0;
    if (r < 0.0 || r > R) throw OutOfDomainError("radial_temperature: r outside [0, l/2]");
    if (r <= w) {
        const double dT = q * w * w / (2.0 * c.kappa_th) * (std::log(R / w) + 0.5);
        return c.T0 + dT - q * r * r / (4.0 * c.kappa_th);
    }
    return c.T0 + q * w * w / (2.0 * c.kappa_th) * std::log(R / r);
}

inline double radial_temperature_slope(const ThermalConfig& c, double r) {
    const double q = source_density(c);
    if (r <= c.w_m) return -q * r / (2.0 * c.kappa_th);
    return -q * sqr(c.w_m) / (2.0 * c.kappa_th * r);
}

inline ThermalResult analytic_circular(const ThermalConfig& c) {
    validate(c);
    const double q = source_density(c);
    const double w = c.w_m;
    const double log_term = std::log(c.side_l / (2.0 * w)) + 0.5;

    ThermalResult res;
    res.P_abs = absorbed_power(c);
    res.delta_T = q * w * w / (2.0 * c.kappa_th) * log_term;
    res.K_th = 2.0 * pi * c.kappa_th * c.d_m / log_term;
    // Integral of T(r) over the disc of radius l/2, divided by its area.
    res.T_avg = c.T0 + q * w * w / (4.0 * c.kappa_th) * (1.0 - 2.0 * sqr(w / c.side_l));
    res.T_avg_printed = c.T0 + q * w * w / (4.0 * c.kappa_th) * (1.0 - 2.0 * sqr(c.side_l / w));
    return res;
}

enum class MembraneShape { Square, Circle };

/// Temperature rise on an n x n node grid spanning [-l/2, l/2]^2. Frame nodes (and, for
/// the circle, nodes with r >= l/2) are held at zero rise.
struct ThermalField {
    std::size_t n = 0;
    double h = 0.0;
    std::vector<double> rise;  // row-major, K
    std::size_t iterations = 0;

    double at(std::size_t i, std::size_t j) const { return rise[i * n + j]; }
    double center() const { return at(n / 2, n / 2); }
    double coordinate(std::size_t i) const {
        return -0.5 * h * static_cast<double>(n - 1) + h * static_cast<double>(i);
    }
};

namespace detail {

// Fraction of the h x h cell around (x, y) covered by the beam disc, by sub-sampling.
inline double disc_coverage(double x, double y, double h, double w, int sub = 8) {
    const double reach = w + h;
    if (std::abs(x) > reach || std::abs(y) > reach) return 0.0;
    int hits = 0;
    for (int a = 0; a < sub; ++a) {
        for (int b = 0; b < sub; ++b) {
            const double px = x + h * ((a + 0.5) / sub - 0.5);
            const double py = y + h * ((b + 0.5) / sub - 0.5);
            if (px * px + py * py <= w * w) ++hits;
        }
    }
    return static_cast<double>(hits) / (sub * sub);
}

}  // namespace detail

/// 5-point finite-difference solve of -kappa_th lap(T) = q on the membrane, by
/// conjugate gradients to a residual of 1e-8 relative to the right-hand side. The
/// source is the beam disc weighted by cell coverage and rescaled to inject exactly
/// P_abs.
inline ThermalField fdm_solve(const ThermalConfig& c, std::size_t grid_n, MembraneShape shape,
                              std::size_t max_iterations = 0) {
    validate(c);
    if (grid_n < 5 || grid_n % 2 == 0) {
        throw ValidationError("fdm: grid_n must be odd and >= 5 so the center is a node");
    }
    const std::size_t n = grid_n;
    ThermalField field;
    field.n = n;
    field.h = c.side_l / static_cast<double>(n - 1);
    field.rise.assign(n * n, 0.0);
    const double h = field.h;
    const double R = c.side_l / 2.0;

    std::vector<char> active(n * n, 0);
    std::vector<double> rhs(n * n, 0.0);
    double coverage_sum = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double x = field.coordinate(i);
            const double y = field.coordinate(j);
            if (shape == MembraneShape::Circle && x * x + y * y >= R * R) continue;
            active[i * n + j] = 1;
            const double cov = detail::disc_coverage(x, y, h, c.w_m);
            rhs[i * n + j] = cov;
            coverage_sum += cov;
        }
    }
    const double p_abs = absorbed_power(c);
    if (coverage_sum <= 0.0 || p_abs <= 0.0) return field;
    // sum(rhs) * kappa * d = P_abs once scaled: each node row is 4T - sum(nb) = q h^2 / kappa.
    const double scale = p_abs / (c.d_m * c.kappa_th * coverage_sum);
    for (auto& v : rhs) v *= scale;

    auto apply = [&](const std::vector<double>& u, std::vector<double>& out) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            for (std::size_t j = 1; j + 1 < n; ++j) {
                const std::size_t k = i * n + j;
                if (!active[k]) {
                    out[k] = 0.0;
                    continue;
                }
                out[k] = 4.0 * u[k] - u[k - 1] - u[k + 1] - u[k - n] - u[k + n];
            }
        }
    };

    std::vector<double>& x = field.rise;
    std::vector<double> r = rhs;
    std::vector<double> p = r;
    std::vector<double> Ap(n * n, 0.0);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
        return s;
    };
    const double b_norm = std::sqrt(dot(rhs, rhs));
    double rr = dot(r, r);
    const std::size_t cap = max_iterations ? max_iterations : 20 * n + 1000;
    std::size_t it = 0;
    while (std::sqrt(rr) > 1e-8 * b_norm) {
        if (it >= cap) {
            throw ConvergenceError("fdm: residual did not reach 1e-8 within the iteration cap");
        }
        apply(p, Ap);
        const double alpha = rr / dot(p, Ap);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
        rr = rr_new;
        ++it;
    }
    field.iterations = it;
    return field;
}

/// Square membrane of side l: center rise, link, and geometric prefactor relative to the
/// circular closed form.
inline ThermalResult fdm_square(const ThermalConfig& c, std::size_t grid_n) {
    if (grid_n < 201) throw ValidationError("fdm_square: grid_n must be >= 201");
    const ThermalResult circ = analytic_circular(c);
    const ThermalField field = fdm_solve(c, grid_n, MembraneShape::Square);
    ThermalResult res = circ;
    res.delta_T = field.center();
    res.K_th = res.delta_T > 0.0 ? res.P_abs / res.delta_T : circ.K_th;
    res.f_g = circ.delta_T > 0.0 ? res.delta_T / circ.delta_T : 1.0;
    double sum = 0.0;
    for (double v : field.rise) sum += v;
    res.T_avg = c.T0 + sum / static_cast<double>(field.rise.size());
    res.T_avg_printed = circ.T_avg_printed;
    return res;
}

/// Thermal link used by the rate model: explicit override, else the circular closed form.
inline double thermal_link(const SystemParams& sys) {
    if (sys.membrane().K_th_override) return *sys.membrane().K_th_override;
    return analytic_circular(thermal_config(sys)).K_th;
}

}  // namespace hybridmech
