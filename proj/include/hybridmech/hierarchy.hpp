#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hybridmech/params.hpp"
#include "hybridmech/rates.hpp"

namespace hybridmech {

enum class CheckStatus { Pass, Warn, Fail };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Warn: return "WARN";
        case CheckStatus::Fail: return "FAIL";
    }
    return "?";
}

struct HierarchyCheck {
    std::string name;
    double ratio = 0.0;
    CheckStatus status = CheckStatus::Pass;
};

struct HierarchyOptions {
    double tau = 1.0 / kCodata.c;  // s, propagation time to the atoms (1 m default)
    // Field bandwidth; defaults to sqrt(|delta| max(1/tau, kappa)), which balances the two
    // inequalities it must sit between.
    std::optional<double> theta;
    double margin = 10.0;
    double bad_cavity_warn = 5.0;
};

struct HierarchyReport {
    double theta = 0.0;
    std::vector<HierarchyCheck> checks;
    // Lattice depth implied by the configured power over the trap-matching depth.
    double trap_depth_ratio = 0.0;

    bool all_pass() const {
        return std::none_of(checks.begin(), checks.end(),
                            [](const HierarchyCheck& c) { return c.status == CheckStatus::Fail; });
    }
    const HierarchyCheck* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

inline HierarchyReport check_hierarchy(const SystemParams& sys, const RateSet& rates,
                                       const HierarchyOptions& opt = {}) {
    const double delta = std::abs(sys.atoms().delta);
    const double kappa = sys.derived().kappa;
    const double inv_tau = 1.0 / opt.tau;
    const double w_max = std::max(rates.omega_m, rates.omega_at);
    const double w_min = std::min(rates.omega_m, rates.omega_at);

    HierarchyReport rep;
    rep.theta = opt.theta ? *opt.theta : std::sqrt(delta * std::max(inv_tau, kappa));

    auto strong = [&](std::string name, double ratio) {
        rep.checks.push_back(
            {std::move(name), ratio, ratio >= opt.margin ? CheckStatus::Pass : CheckStatus::Fail});
    };
    strong("delta >> theta", delta / rep.theta);
    strong("theta >> 1/tau", rep.theta / inv_tau);
    strong("theta >> kappa", rep.theta / kappa);
    strong("1/tau >> omega", inv_tau / w_max);

    const double bad_cavity = kappa / w_max;
    CheckStatus bc = CheckStatus::Pass;
    if (bad_cavity < opt.bad_cavity_warn) {
        bc = CheckStatus::Fail;
    } else if (bad_cavity < opt.margin) {
        bc = CheckStatus::Warn;
    }
    rep.checks.push_back({"kappa >> omega", bad_cavity, bc});

    const double gm2 = sqr(rates.g_m);
    const double gat2 = sqr(rates.g_at);
    const double cross = rates.g_m * rates.g_at;
    strong("omega >> g_m^2", gm2 > 0.0 ? w_min / gm2 : INFINITY);
    strong("omega >> g_at^2", gat2 > 0.0 ? w_min / gat2 : INFINITY);
    strong("omega >> g_m g_at", cross > 0.0 ? w_min / cross : INFINITY);

    rep.trap_depth_ratio = lattice_depth_from_power(sys) / sys.derived().V0;
    return rep;
}

}  // namespace hybridmech
