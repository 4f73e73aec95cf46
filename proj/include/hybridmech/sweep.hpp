#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hybridmech/dynamics.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/params.hpp"
#include "hybridmech/rates.hpp"

namespace hybridmech {

enum class SweepParam { Finesse, GammaCool, N, PowerP, Delta };
enum class AxisScale { Linear, Log };

inline const char* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::Finesse: return "finesse";
        case SweepParam::GammaCool: return "gamma_cool";
        case SweepParam::N: return "N";
        case SweepParam::PowerP: return "power_P";
        case SweepParam::Delta: return "delta";
    }
    return "?";
}

inline SweepParam sweep_param_from(const std::string& name) {
    if (name == "finesse") return SweepParam::Finesse;
    if (name == "gamma_cool") return SweepParam::GammaCool;
    if (name == "N") return SweepParam::N;
    if (name == "power_P") return SweepParam::PowerP;
    if (name == "delta") return SweepParam::Delta;
    throw ValidationError("unknown sweep axis '" + name +
                          "' (expected finesse, gamma_cool, N, power_P or delta)");
}

inline const char* to_string(AxisScale s) { return s == AxisScale::Log ? "log" : "linear"; }

inline AxisScale axis_scale_from(const std::string& name) {
    if (name == "log") return AxisScale::Log;
    if (name == "linear") return AxisScale::Linear;
    throw ValidationError("unknown axis scale '" + name + "' (expected linear or log)");
}

struct SweepAxis {
    SweepParam param = SweepParam::Finesse;
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 2;
    AxisScale scale = AxisScale::Linear;

    void validate() const {
        if (points < 2) throw ValidationError(std::string("sweep axis ") + to_string(param) + ": points >= 2");
        if (!(min < max) || !std::isfinite(min) || !std::isfinite(max)) {
            throw ValidationError(std::string("sweep axis ") + to_string(param) + ": min < max");
        }
        if (scale == AxisScale::Log && !(min > 0.0)) {
            throw ValidationError(std::string("sweep axis ") + to_string(param) + ": log scale needs min > 0");
        }
    }

    double value(std::size_t i) const {
        const double f = static_cast<double>(i) / static_cast<double>(points - 1);
        if (i + 1 == points) return max;
        if (scale == AxisScale::Log) return min * std::pow(max / min, f);
        return min + (max - min) * f;
    }

    std::vector<double> values() const {
        std::vector<double> v(points);
        for (std::size_t i = 0; i < points; ++i) v[i] = value(i);
        return v;
    }
};

/// Baseline parameters plus one or two swept axes. Quantities not on an axis keep
/// their baseline values; power_P is never re-derived from the trap condition.
struct SweepSpec {
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    MembraneParams membrane = table1_membrane();
    AtomParams atoms = table1_atoms();
    CavityParams cavity = table1_cavity();
    CoolingSettings cooling;
};

struct SweepRecord {
    std::size_t i = 0;
    std::size_t j = 0;
    double x1 = 0.0;
    double x2 = std::numeric_limits<double>::quiet_NaN();
    double gamma_cool = 0.0;
    RateSet rates;
    double n_ss_exact = std::numeric_limits<double>::quiet_NaN();
    double n_ss_adiabatic = std::numeric_limits<double>::quiet_NaN();
    double ratio_at = 0.0;
    double ratio_mdiff = 0.0;
    double ratio_mth = 0.0;
    double ratio_total = 0.0;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

struct SweepResult {
    std::vector<SweepRecord> records;  // row-major in (axis1 index, axis2 index)
    std::optional<std::size_t> best;   // index into records
};

namespace detail {

struct Point {
    MembraneParams membrane;
    AtomParams atoms;
    CavityParams cavity;
    CoolingSettings cooling;
};

inline void apply(Point& p, SweepParam param, double v) {
    switch (param) {
        case SweepParam::Finesse: p.cavity.finesse = v; break;
        case SweepParam::GammaCool: p.cooling.gamma_cool = v; break;
        case SweepParam::N: p.atoms.N = v; break;
        case SweepParam::PowerP: p.cavity.power_P = v; break;
        case SweepParam::Delta: p.atoms.delta = v; break;
    }
}

}  // namespace detail

/// Ratios of each decoherence channel to the coherent coupling.
inline void fill_ratios(SweepRecord& rec) {
    const RateSet& r = rec.rates;
    rec.ratio_at = r.gamma_at_diff / r.g;
    rec.ratio_mdiff = r.gamma_m_diff / r.g;
    rec.ratio_mth = r.gamma_m_th / r.g;
    rec.ratio_total = r.gamma_total() / r.g;
}

/// One grid cell. Errors from validation or the steady-state solve are written into
/// `status` instead of propagating.
inline SweepRecord evaluate_point(const MembraneParams& mem, const AtomParams& at,
                                  const CavityParams& cav, const CoolingSettings& cooling,
                                  bool with_dynamics) {
    SweepRecord rec;
    rec.gamma_cool = cooling.gamma_cool;
    try {
        const SystemParams sys = build_system(mem, at, cav);
        rec.rates = full_rates(sys);
        fill_ratios(rec);
        if (with_dynamics) {
            if (cooling.gamma_cool > 0.0) {
                rec.n_ss_adiabatic = adiabatic_cooling(rec.rates, cooling).n_ss;
            }
            rec.n_ss_exact = occupations(steady_state(build_model(rec.rates, cooling))).n_m;
        }
    } catch (const Error& e) {
        rec.status = e.what();
    }
    return rec;
}

/// Runs fn(k) for k in [0, count) on up to `workers` threads. Each k writes only its own
/// slot, so ordering of the output does not depend on scheduling.
inline void parallel_for(std::size_t count, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

inline SweepResult run_sweep(const SweepSpec& spec, bool with_dynamics, std::size_t workers) {
    spec.axis1.validate();
    if (spec.axis2) {
        spec.axis2->validate();
        if (spec.axis2->param == spec.axis1.param) {
            throw ValidationError("sweep: both axes sweep the same parameter");
        }
    }
    const std::size_t n1 = spec.axis1.points;
    const std::size_t n2 = spec.axis2 ? spec.axis2->points : 1;
    SweepResult res;
    res.records.resize(n1 * n2);
    parallel_for(n1 * n2, workers, [&](std::size_t k) {
        const std::size_t i = k / n2;
        const std::size_t j = k % n2;
        detail::Point p{spec.membrane, spec.atoms, spec.cavity, spec.cooling};
        const double x1 = spec.axis1.value(i);
        detail::apply(p, spec.axis1.param, x1);
        double x2 = std::numeric_limits<double>::quiet_NaN();
        if (spec.axis2) {
            x2 = spec.axis2->value(j);
            detail::apply(p, spec.axis2->param, x2);
        }
        SweepRecord rec = evaluate_point(p.membrane, p.atoms, p.cavity, p.cooling, with_dynamics);
        rec.i = i;
        rec.j = j;
        rec.x1 = x1;
        rec.x2 = x2;
        res.records[k] = std::move(rec);
    });
    return res;
}

namespace detail {

template <typename Key>
std::optional<std::size_t> argmin(const std::vector<SweepRecord>& recs, Key key) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < recs.size(); ++k) {
        if (!recs[k].ok() || !std::isfinite(key(recs[k]))) continue;
        if (!best || key(recs[k]) < key(recs[*best])) best = k;
    }
    return best;
}

}  // namespace detail

/// Strong-coupling ratios along the swept axis; best = argmin of Gamma/g.
inline SweepResult sweep_coherent(const SweepSpec& spec, std::size_t workers = 0) {
    SweepResult res = run_sweep(spec, false, workers);
    res.best = detail::argmin(res.records, [](const SweepRecord& r) { return r.ratio_total; });
    return res;
}

/// Exact and adiabatic steady-state occupation on the grid; best = argmin of n_ss_exact.
inline SweepResult sweep_cooling(const SweepSpec& spec, std::size_t workers = 0) {
    SweepResult res = run_sweep(spec, true, workers);
    res.best = detail::argmin(res.records, [](const SweepRecord& r) { return r.n_ss_exact; });
    return res;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_slope: need >= 2 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

enum class Objective { MinTotalRatio, MinOccupation };

inline const char* to_string(Objective o) {
    return o == Objective::MinTotalRatio ? "min_total_ratio" : "min_occupation";
}

inline Objective objective_from(const std::string& name) {
    if (name == "min_total_ratio") return Objective::MinTotalRatio;
    if (name == "min_occupation") return Objective::MinOccupation;
    throw ValidationError("unknown objective '" + name + "'");
}

struct OptimizeBound {
    SweepParam param = SweepParam::Finesse;
    double lo = 0.0;
    double hi = 0.0;
    AxisScale scale = AxisScale::Linear;
};

struct OptimizeOptions {
    std::size_t coarse_points = 25;  // per bound
    double tolerance = 1e-5;         // final step, relative to each range in search coordinates
    std::size_t max_evaluations = 5000;
    std::size_t workers = 0;
};

struct TraceEntry {
    std::vector<double> x;
    double value = 0.0;
};

struct OptimumRecord {
    std::vector<double> x;
    double value = 0.0;
    SweepRecord record;
    std::vector<TraceEntry> trace;
    std::size_t evaluations = 0;
};

/// Coarse grid over the bounds, then coordinate descent from the best cell with steps
/// halved whenever no neighbour improves. Log-scaled bounds are searched in log space.
inline OptimumRecord optimize(Objective objective, const std::vector<OptimizeBound>& bounds,
                              const SweepSpec& baseline, const OptimizeOptions& opt = {}) {
    if (bounds.empty() || bounds.size() > 2) throw ValidationError("optimize: need one or two bounds");
    for (const auto& b : bounds) {
        if (!(b.lo <= b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw ValidationError(std::string("optimize: bound ") + to_string(b.param) + " needs lo <= hi");
        }
        if (b.scale == AxisScale::Log && !(b.lo > 0.0)) {
            throw ValidationError(std::string("optimize: bound ") + to_string(b.param) + " log scale needs lo > 0");
        }
    }
    if (opt.coarse_points < 2) throw ValidationError("optimize: coarse_points >= 2");
    const bool dynamics = objective == Objective::MinOccupation;
    const std::size_t dim = bounds.size();

    auto to_search = [&](std::size_t d, double v) {
        return bounds[d].scale == AxisScale::Log ? std::log(v) : v;
    };
    auto from_search = [&](std::size_t d, double s) {
        const double v = bounds[d].scale == AxisScale::Log ? std::exp(s) : s;
        return std::clamp(v, bounds[d].lo, bounds[d].hi);
    };
    std::vector<double> s_lo(dim), s_hi(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        s_lo[d] = to_search(d, bounds[d].lo);
        s_hi[d] = to_search(d, bounds[d].hi);
    }

    auto evaluate = [&](const std::vector<double>& s) {
        detail::Point p{baseline.membrane, baseline.atoms, baseline.cavity, baseline.cooling};
        for (std::size_t d = 0; d < dim; ++d) detail::apply(p, bounds[d].param, from_search(d, s[d]));
        SweepRecord rec = evaluate_point(p.membrane, p.atoms, p.cavity, p.cooling, dynamics);
        const double v = !rec.ok() ? INFINITY
                         : dynamics ? rec.n_ss_exact
                                    : rec.ratio_total;
        return std::make_pair(std::isfinite(v) ? v : INFINITY, rec);
    };

    // Coarse grid; a degenerate bound contributes a single point.
    std::vector<std::size_t> counts(dim);
    std::size_t cells = 1;
    for (std::size_t d = 0; d < dim; ++d) {
        counts[d] = s_lo[d] == s_hi[d] ? 1 : opt.coarse_points;
        cells *= counts[d];
    }
    auto cell_point = [&](std::size_t k) {
        std::vector<double> s(dim);
        for (std::size_t d = dim; d-- > 0;) {
            const std::size_t idx = k % counts[d];
            k /= counts[d];
            s[d] = counts[d] == 1 ? s_lo[d]
                                  : s_lo[d] + (s_hi[d] - s_lo[d]) * static_cast<double>(idx) /
                                                  static_cast<double>(counts[d] - 1);
        }
        return s;
    };
    std::vector<double> grid_values(cells);
    parallel_for(cells, opt.workers, [&](std::size_t k) { grid_values[k] = evaluate(cell_point(k)).first; });

    std::size_t best_cell = cells;
    for (std::size_t k = 0; k < cells; ++k) {
        if (std::isfinite(grid_values[k]) && (best_cell == cells || grid_values[k] < grid_values[best_cell])) {
            best_cell = k;
        }
    }
    if (best_cell == cells) throw NoFeasiblePointError("optimize: every coarse grid cell failed");

    OptimumRecord out;
    std::vector<double> s = cell_point(best_cell);
    auto [value, record] = evaluate(s);
    out.evaluations = cells + 1;
    auto to_x = [&](const std::vector<double>& pt) {
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d) x[d] = from_search(d, pt[d]);
        return x;
    };
    out.trace.push_back({to_x(s), value});

    std::vector<double> step(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        step[d] = counts[d] == 1 ? 0.0 : (s_hi[d] - s_lo[d]) / static_cast<double>(counts[d] - 1);
    }
    auto done = [&] {
        for (std::size_t d = 0; d < dim; ++d) {
            if (step[d] > opt.tolerance * (s_hi[d] - s_lo[d])) return false;
        }
        return true;
    };
    while (!done() && out.evaluations < opt.max_evaluations) {
        bool moved = false;
        for (std::size_t d = 0; d < dim; ++d) {
            if (step[d] == 0.0) continue;
            for (double sign : {-1.0, 1.0}) {
                std::vector<double> trial = s;
                trial[d] = std::clamp(s[d] + sign * step[d], s_lo[d], s_hi[d]);
                if (trial[d] == s[d]) continue;
                auto [v, rec] = evaluate(trial);
                ++out.evaluations;
                if (v < value) {
                    s = trial;
                    value = v;
                    record = rec;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) {
            for (auto& h : step) h *= 0.5;
        }
        out.trace.push_back({to_x(s), value});
    }

    out.x = to_x(s);
    out.value = value;
    out.record = record;
    out.record.x1 = out.x[0];
    if (dim > 1) out.record.x2 = out.x[1];
    return out;
}

}  // namespace hybridmech
