#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hybridmech/config.hpp"
#include "hybridmech/rates.hpp"
#include "hybridmech/sweep.hpp"

namespace hybridmech {

struct BandCheck {
    std::string name;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    bool pass() const { return std::isfinite(value) && value >= lo && value <= hi; }
};

inline BandCheck relative_band(std::string name, double value, double target, double rel) {
    return {std::move(name), value, target * (1.0 - rel), target * (1.0 + rel)};
}

struct Reproduction {
    std::vector<BandCheck> checks;
    SweepResult sweep;

    bool all_pass() const {
        for (const auto& c : checks) {
            if (!c.pass()) return false;
        }
        return !checks.empty();
    }
};

/// Reference rates. Rates are in s^-1, quoted as 10^3 s^-1 in the bands.
inline Reproduction reproduce_table1(const Config& cfg = {}) {
    const RateSet r = full_rates(cfg.system());
    Reproduction out;
    out.checks = {
        relative_band("g", r.g, 214e3, 0.02),
        relative_band("gamma_m_diff", r.gamma_m_diff, 60e3, 0.03),
        relative_band("gamma_m_th", r.gamma_m_th, 73e3, 0.05),
        relative_band("delta_T", r.delta_T, 4.0, 0.05),
        relative_band("gamma_at_diff", r.gamma_at_diff, 8e3, 0.10),
    };
    return out;
}

inline SweepSpec fig3_spec(const Config& cfg = {}) {
    SweepSpec s;
    s.axis1 = {SweepParam::Finesse, 50.0, 1000.0, 60, AxisScale::Log};
    s.membrane = cfg.membrane;
    s.atoms = cfg.atoms;
    s.cavity = cfg.cavity;
    s.cooling = cfg.cooling;
    return s;
}

inline SweepSpec fig4_spec(const Config& cfg = {}) {
    SweepSpec s = fig3_spec(cfg);
    s.axis2 = SweepAxis{SweepParam::GammaCool, 1e4, 1e6, 60, AxisScale::Log};
    return s;
}

inline Reproduction reproduce_fig3(const Config& cfg = {}, std::size_t workers = 0) {
    Reproduction out;
    out.sweep = sweep_coherent(fig3_spec(cfg), workers);
    std::vector<double> F, at, mdiff;
    double worst = 0.0;
    for (const auto& rec : out.sweep.records) {
        if (!rec.ok()) {
            worst = INFINITY;
            continue;
        }
        F.push_back(rec.x1);
        at.push_back(rec.ratio_at);
        mdiff.push_back(rec.ratio_mdiff);
        worst = std::max(worst, rec.ratio_total);
    }
    const double nan = std::nan("");
    const double slope_at = F.size() >= 2 ? loglog_slope(F, at) : nan;
    const double slope_mdiff = F.size() >= 2 ? loglog_slope(F, mdiff) : nan;
    const SweepRecord* best = out.sweep.best ? &out.sweep.records[*out.sweep.best] : nullptr;
    out.checks = {
        {"slope gamma_at_diff/g", slope_at, -1.0 - 1e-3, -1.0 + 1e-3},
        {"slope gamma_m_diff/g", slope_mdiff, 1.0 - 1e-3, 1.0 + 1e-3},
        {"argmin finesse", best ? best->x1 : nan, 250.0, 400.0},
        {"min Gamma/g", best ? best->ratio_total : nan, 0.4, 1.5},
        {"max Gamma/g", worst, 0.0, 10.0},
    };
    return out;
}

/// Number of strict interior local minima along axis1 at fixed axis2 index j.
inline std::size_t interior_minima(const SweepResult& res, std::size_t n1, std::size_t n2, std::size_t j) {
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < n1; ++i) {
        const double prev = res.records[(i - 1) * n2 + j].n_ss_exact;
        const double here = res.records[i * n2 + j].n_ss_exact;
        const double next = res.records[(i + 1) * n2 + j].n_ss_exact;
        if (here < prev && here < next) ++count;
    }
    return count;
}

inline Reproduction reproduce_fig4(const Config& cfg = {}, std::size_t workers = 0) {
    Reproduction out;
    const SweepSpec spec = fig4_spec(cfg);
    out.sweep = sweep_cooling(spec, workers);
    const double nan = std::nan("");
    const SweepRecord* best = out.sweep.best ? &out.sweep.records[*out.sweep.best] : nullptr;
    const double minima = best ? static_cast<double>(interior_minima(out.sweep, spec.axis1.points,
                                                                      spec.axis2->points, best->j))
                               : nan;
    out.checks = {
        {"min n_ss_exact", best ? best->n_ss_exact : nan, 0.4, 1.5},
        {"argmin finesse", best ? best->x1 : nan, 350.0, 600.0},
        {"argmin gamma_cool", best ? best->x2 : nan, 1.5e5, 3e5},
        {"interior minima along optimal gamma_cool cut", minima, 1.0, 1.0},
    };
    return out;
}

}  // namespace hybridmech
