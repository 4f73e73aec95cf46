#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hybridmech.hpp"

using namespace hybridmech;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kOutDirEnv = "HYBRIDMECH_OUT_DIR";

struct Globals {
    std::string config_path;
    std::string out;
    std::string format;
    std::size_t workers = 0;
    std::vector<std::string> sets;
};

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string csv() const {
        std::ostringstream os;
        write_line(os, header_);
        for (const auto& r : rows_) write_line(os, r);
        return os.str();
    }

    json to_json() const {
        json arr = json::array();
        for (const auto& r : rows_) {
            json obj;
            for (std::size_t k = 0; k < header_.size(); ++k) {
                double v = 0;
                const std::string& cell = r[k];
                char* end = nullptr;
                v = std::strtod(cell.c_str(), &end);
                if (end && *end == '\0' && !cell.empty() && std::isfinite(v)) {
                    obj[header_[k]] = v;
                } else {
                    obj[header_[k]] = cell;
                }
            }
            arr.push_back(obj);
        }
        return arr;
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) os << ',';
            os << csv_field(cells[k]);
        }
        os << "\r\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rates_json(const RateSet& r) {
    return {{"omega_m", r.omega_m},           {"omega_at", r.omega_at},
            {"g_m", r.g_m},                   {"g_at", r.g_at},
            {"g", r.g},                       {"gamma_m", r.gamma_m},
            {"gamma_m_diff", r.gamma_m_diff}, {"gamma_at_diff", r.gamma_at_diff},
            {"N_m_bar", r.N_m_bar},           {"gamma_m_th", r.gamma_m_th},
            {"delta_T", r.delta_T},           {"P_abs", r.P_abs},
            {"K_th", r.K_th},                 {"Gamma", r.gamma_total()}};
}

const std::vector<std::string> kRecordColumns = {
    "g",         "gamma_m_diff", "gamma_m_th",  "gamma_at_diff", "N_m_bar",
    "ratio_at",  "ratio_mdiff",  "ratio_mth",   "ratio_total",   "n_ss_exact",
    "n_ss_adiabatic", "status"};

std::vector<std::string> record_cells(const SweepRecord& r) {
    return {num(r.rates.g),   num(r.rates.gamma_m_diff), num(r.rates.gamma_m_th),
            num(r.rates.gamma_at_diff), num(r.rates.N_m_bar), num(r.ratio_at),
            num(r.ratio_mdiff), num(r.ratio_mth),        num(r.ratio_total),
            num(r.n_ss_exact), num(r.n_ss_adiabatic),    r.status};
}

json record_json(const SweepRecord& r) {
    return {{"rates", rates_json(r.rates)},
            {"ratio_at", r.ratio_at},
            {"ratio_mdiff", r.ratio_mdiff},
            {"ratio_mth", r.ratio_mth},
            {"ratio_total", r.ratio_total},
            {"n_ss_exact", finite_or_null(r.n_ss_exact)},
            {"n_ss_adiabatic", finite_or_null(r.n_ss_adiabatic)},
            {"gamma_cool", r.gamma_cool},
            {"status", r.status}};
}

Table sweep_table(const SweepSpec& spec, const SweepResult& res) {
    std::vector<std::string> header{to_string(spec.axis1.param)};
    if (spec.axis2) header.push_back(to_string(spec.axis2->param));
    header.insert(header.end(), kRecordColumns.begin(), kRecordColumns.end());
    Table t(header);
    for (const auto& rec : res.records) {
        std::vector<std::string> cells{num(rec.x1)};
        if (spec.axis2) cells.push_back(num(rec.x2));
        auto rest = record_cells(rec);
        cells.insert(cells.end(), rest.begin(), rest.end());
        t.row(std::move(cells));
    }
    return t;
}

SweepAxis parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 5) {
        throw ValidationError("axis '" + text + "' must be name:min:max:points:scale");
    }
    SweepAxis a;
    try {
        a.param = sweep_param_from(parts[0]);
        a.min = std::stod(parts[1]);
        a.max = std::stod(parts[2]);
        a.points = static_cast<std::size_t>(std::stoul(parts[3]));
    } catch (const std::logic_error&) {
        throw ValidationError("axis '" + text + "' has a malformed number");
    }
    a.scale = axis_scale_from(parts[4]);
    return a;
}

OptimizeBound parse_bound(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw ValidationError("bound '" + text + "' must be name:lo:hi:scale");
    OptimizeBound b;
    b.param = sweep_param_from(parts[0]);
    try {
        b.lo = std::stod(parts[1]);
        b.hi = std::stod(parts[2]);
    } catch (const std::logic_error&) {
        throw ValidationError("bound '" + text + "' has a malformed number");
    }
    b.scale = axis_scale_from(parts[3]);
    return b;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Runner {
public:
    Runner(Globals g, std::string subcommand, std::vector<std::string> argv)
        : g_(std::move(g)), sub_(std::move(subcommand)), argv_(std::move(argv)) {}

    Config config() const {
        json doc = json::object();
        if (!g_.config_path.empty()) doc = read_json_file(g_.config_path);
        for (const auto& s : g_.sets) apply_override(doc, s);
        return config_from_json(doc);
    }

    std::string format(const std::string& fallback) const {
        const std::string f = g_.format.empty() ? fallback : g_.format;
        if (f != "csv" && f != "json") throw ValidationError("--format must be csv or json");
        return f;
    }

    std::size_t workers() const { return g_.workers; }

    /// Writes the primary output to --out, to $HYBRIDMECH_OUT_DIR/<sub>.<ext>, or stdout.
    void emit(const std::string& body, const std::string& ext) {
        std::string path = g_.out;
        if (path.empty()) {
            if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) {
                fs::create_directories(dir);
                path = (fs::path(dir) / (sub_ + "." + ext)).string();
            }
        }
        if (path.empty()) {
            std::cout << body;
            if (!body.empty() && body.back() != '\n') std::cout << '\n';
            return;
        }
        write_file(path, body);
        primary_ = path;
    }

    void emit_extra(const std::string& path, const std::string& body) {
        write_file(path, body);
    }

    void finish(const Config& cfg) const {
        json manifest{{"config_hash", config_hash(cfg)},
                      {"tool_version", kVersion},
                      {"subcommand", sub_},
                      {"args", argv_},
                      {"timestamp", utc_timestamp()},
                      {"outputs", outputs_}};
        if (primary_.empty()) {
            std::cerr << manifest.dump() << '\n';
        } else {
            std::ofstream(primary_ + ".manifest.json") << manifest.dump(2) << '\n';
        }
    }

private:
    void write_file(const std::string& path, const std::string& body) {
        const fs::path p(path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + path);
        out << body;
        if (!body.empty() && body.back() != '\n') out << '\n';
        outputs_.push_back(path);
    }

    Globals g_;
    std::string sub_;
    std::vector<std::string> argv_;
    std::vector<std::string> outputs_;
    std::string primary_;
};

std::string dump(const json& j) { return j.dump(2); }

void emit_table(Runner& run, const Table& t, const std::string& fmt) {
    if (fmt == "csv") {
        run.emit(t.csv(), "csv");
    } else {
        run.emit(dump(t.to_json()), "json");
    }
}

void emit_report(const std::string& title, const Reproduction& rep) {
    std::cerr << title << '\n';
    for (const auto& c : rep.checks) {
        std::cerr << "  " << (c.pass() ? "PASS" : "FAIL") << "  " << c.name << " = " << num(c.value)
                  << "  [" << num(c.lo) << ", " << num(c.hi) << "]\n";
    }
    std::cerr << (rep.all_pass() ? "PASS" : "FAIL") << '\n';
}

json report_json(const Reproduction& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"value", finite_or_null(c.value)}, {"lo", c.lo},
                          {"hi", c.hi}, {"pass", c.pass()}});
    }
    return {{"checks", checks}, {"pass", rep.all_pass()}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Membrane-atom hybrid optomechanics calculator"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration file");
    app.add_option("--out", g.out, "Output file (default: stdout or $" + std::string(kOutDirEnv) + ")");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", g.workers, "Worker threads for sweeps (0 = all cores)");
    app.add_option("--set", g.sets, "Override, e.g. cavity.finesse=450 (repeatable)")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    auto* rates = app.add_subcommand("rates", "Coupling and decoherence rates");

    auto* optics = app.add_subcommand("optics", "Cavity transmission scan around the laser resonance");
    double o_wmin = 0, o_wmax = 0, o_span = 3.0;
    std::size_t o_points = 241;
    optics->add_option("--omega-min", o_wmin, "rad/s");
    optics->add_option("--omega-max", o_wmax, "rad/s");
    optics->add_option("--span", o_span, "Half-width of the default window in units of kappa");
    optics->add_option("--points", o_points);

    auto* thermal = app.add_subcommand("thermal", "Membrane heating");
    std::size_t t_grid = 0;
    thermal->add_option("--grid", t_grid, "Finite-difference grid for the square membrane (odd, >= 201)");

    auto* steady = app.add_subcommand("steady-state", "Exact and adiabatic steady-state occupation");

    auto* evolve_cmd = app.add_subcommand("evolve", "Covariance evolution from a thermal membrane state");
    double e_tend = 0, e_n0 = -1, e_nat = 0, e_step = 0;
    std::size_t e_points = 301;
    evolve_cmd->add_option("--t-end", e_tend, "s (default: three exchange periods 6 pi / g)");
    evolve_cmd->add_option("--points", e_points);
    evolve_cmd->add_option("--n0", e_n0, "Initial membrane occupation (default: bath occupation)");
    evolve_cmd->add_option("--n0-at", e_nat, "Initial atomic occupation");
    evolve_cmd->add_option("--max-step", e_step, "Integrator step in s");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Stationary quadrature spectra");
    double s_wmin = 0, s_wmax = 0;
    std::size_t s_points = 2001;
    spectrum_cmd->add_option("--omega-min", s_wmin, "rad/s (default: omega_m - 4 g)");
    spectrum_cmd->add_option("--omega-max", s_wmax, "rad/s (default: omega_m + 4 g)");
    spectrum_cmd->add_option("--points", s_points);

    auto* coh = app.add_subcommand("sweep-coherent", "Strong-coupling ratios along one axis");
    std::string coh_axis = "finesse:50:1000:60:log", coh_summary;
    coh->add_option("--axis", coh_axis, "name:min:max:points:scale");
    coh->add_option("--json-summary", coh_summary, "Write the optimum record to this file");

    auto* cool = app.add_subcommand("sweep-cooling", "Steady-state occupation on a two-axis grid");
    std::string cool_a1 = "finesse:50:1000:60:log", cool_a2 = "gamma_cool:1e4:1e6:60:log", cool_summary;
    cool->add_option("--axis1", cool_a1, "name:min:max:points:scale");
    cool->add_option("--axis2", cool_a2, "name:min:max:points:scale");
    cool->add_option("--json-summary", cool_summary, "Write the optimum record to this file");

    auto* opt = app.add_subcommand("optimize", "Coarse grid plus coordinate descent");
    std::string objective = "min_total_ratio";
    std::vector<std::string> bounds_text;
    opt->add_option("--objective", objective, "min_total_ratio or min_occupation");
    opt->add_option("--bound", bounds_text, "name:lo:hi:scale (repeatable)")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    auto* repro = app.add_subcommand("reproduce", "Reference recipes with pass/fail bands");
    std::string recipe;
    repro->add_option("recipe", recipe, "table1, fig3 or fig4")
        ->required()
        ->check(CLI::IsMember({"table1", "fig3", "fig4"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        std::cerr << (subs.empty() ? app.help() : subs.front()->help());
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    Runner run(g, sub->get_name(), std::vector<std::string>(argv + 1, argv + argc));

    try {
        const Config cfg = run.config();

        if (sub == rates) {
            const SystemParams sys = cfg.system();
            const RateSet r = full_rates(sys);
            const HierarchyReport h = check_hierarchy(sys, r, {});
            if (run.format("json") == "csv") {
                Table t({"quantity", "value"});
                for (const auto& [k, v] : rates_json(r).items()) t.row({k, num(v.get<double>())});
                t.row({"kappa", num(sys.derived().kappa)});
                run.emit(t.csv(), "csv");
            } else {
                json checks = json::array();
                for (const auto& c : h.checks) {
                    checks.push_back({{"name", c.name}, {"ratio", c.ratio}, {"status", to_string(c.status)}});
                }
                json out{{"rates", rates_json(r)},
                         {"derived",
                          {{"l_m", sys.derived().l_m},
                           {"l_at", sys.derived().l_at},
                           {"kappa", sys.derived().kappa},
                           {"alpha", sys.derived().alpha},
                           {"V0", sys.derived().V0},
                           {"abs_r_m", sys.derived().abs_r_m}}},
                         {"required_power", sys.atoms().delta > 0
                                                ? json(required_power(sys.atoms(), sys.cavity(), sys.constants()))
                                                : json(nullptr)},
                         {"hierarchy",
                          {{"theta", h.theta}, {"trap_depth_ratio", h.trap_depth_ratio}, {"checks", checks}}}};
                run.emit(dump(out), "json");
            }
        } else if (sub == optics) {
            const SystemParams sys = cfg.system();
            const double kappa = sys.derived().kappa;
            const CavityOptics o = cavity_optics(sys);
            const double res = find_resonance(o, kappa, sys.derived().omega_L);
            const double wmin = o_wmin > 0 ? o_wmin : res - o_span * kappa;
            const double wmax = o_wmax > 0 ? o_wmax : res + o_span * kappa;
            const auto pts = scan(sys, wmin, wmax, o_points);
            if (run.format("csv") == "csv") {
                Table t({"omega", "abs_T2", "phase", "lorentzian_T2"});
                for (const auto& p : pts) t.row({num(p.omega), num(p.abs_T2), num(p.phase), num(p.lorentzian_T2)});
                run.emit(t.csv(), "csv");
            } else {
                const double slope = phase_slope_at(o, kappa, res);
                json out{{"resonance", res},
                         {"kappa", kappa},
                         {"abs_T2_peak", std::norm(cavity_response(o, res).T_w)},
                         {"phase_slope", slope},
                         {"phase_slope_times_kappa", slope * kappa},
                         {"abs_r_m_slab", std::abs(slab(sys.membrane().n_m, sys.membrane().d_m,
                                                        sys.derived().k_L).r)}};
                run.emit(dump(out), "json");
            }
        } else if (sub == thermal) {
            const ThermalConfig tc = thermal_config(cfg.system());
            const ThermalResult r = t_grid ? fdm_square(tc, t_grid) : analytic_circular(tc);
            json out{{"P_abs", r.P_abs},
                     {"delta_T", r.delta_T},
                     {"K_th", r.K_th},
                     {"T_avg", r.T_avg},
                     {"T_avg_printed", r.T_avg_printed},
                     {"f_g", r.f_g ? json(*r.f_g) : json(nullptr)}};
            if (run.format("json") == "csv") {
                Table t({"quantity", "value"});
                for (const auto& [k, v] : out.items()) t.row({k, v.is_null() ? "" : num(v.get<double>())});
                run.emit(t.csv(), "csv");
            } else {
                run.emit(dump(out), "json");
            }
        } else if (sub == steady) {
            const RateSet r = full_rates(cfg.system());
            const LinearModel m = build_model(r, cfg.cooling);
            const GaussianState s = steady_state(m);
            const Occupations n = occupations(s);
            json out{{"n_m", n.n_m},
                     {"n_at", n.n_at},
                     {"gamma_cool", cfg.cooling.gamma_cool},
                     {"lyapunov_residual", lyapunov_residual(m, s.cov)},
                     {"min_uncertainty_eigenvalue", min_uncertainty_eigenvalue(s.cov)}};
            json cov = json::array();
            for (int i = 0; i < 4; ++i) {
                cov.push_back({s.cov(i, 0), s.cov(i, 1), s.cov(i, 2), s.cov(i, 3)});
            }
            out["covariance"] = cov;
            json modes = json::array();
            for (const auto& md : normal_modes(m)) modes.push_back({{"frequency", md.frequency}, {"decay", md.decay}});
            out["normal_modes"] = modes;
            if (cfg.cooling.gamma_cool > 0) {
                const AdiabaticCooling a = adiabatic_cooling(r, cfg.cooling);
                out["adiabatic"] = {{"Gamma_cool", a.Gamma_cool}, {"n_ss", a.n_ss},
                                    {"n_ss_1", a.n_ss_1},         {"n_ss_2", a.n_ss_2},
                                    {"n_ss_3", a.n_ss_3},         {"relaxation_rate", a.relaxation_rate}};
            }
            if (run.format("json") == "csv") {
                Table t({"quantity", "value"});
                t.row({"n_m", num(n.n_m)});
                t.row({"n_at", num(n.n_at)});
                if (out.contains("adiabatic")) t.row({"n_ss_adiabatic", num(out["adiabatic"]["n_ss"].get<double>())});
                run.emit(t.csv(), "csv");
            } else {
                run.emit(dump(out), "json");
            }
        } else if (sub == evolve_cmd) {
            const RateSet r = full_rates(cfg.system());
            const LinearModel m = build_model(r, cfg.cooling);
            if (e_points < 2) throw ValidationError("evolve: --points must be >= 2");
            const double t_end = e_tend > 0 ? e_tend : 3.0 * two_pi / r.g;
            std::vector<double> t(e_points);
            for (std::size_t i = 0; i < e_points; ++i) {
                t[i] = t_end * static_cast<double>(i) / static_cast<double>(e_points - 1);
            }
            EvolveOptions eo;
            if (e_step > 0) eo.max_step = e_step;
            const auto states = evolve(m, GaussianState::thermal(e_n0 >= 0 ? e_n0 : r.N_m_bar, e_nat), t, eo);
            Table tab({"t", "n_m", "n_at", "min_uncertainty_eigenvalue"});
            for (std::size_t i = 0; i < states.size(); ++i) {
                const Occupations n = occupations(states[i]);
                tab.row({num(t[i]), num(n.n_m), num(n.n_at), num(min_uncertainty_eigenvalue(states[i].cov))});
            }
            emit_table(run, tab, run.format("csv"));
        } else if (sub == spectrum_cmd) {
            const RateSet r = full_rates(cfg.system());
            const LinearModel m = build_model(r, cfg.cooling);
            if (s_points < 2) throw ValidationError("spectrum: --points must be >= 2");
            const double wmin = s_wmin > 0 ? s_wmin : std::max(0.0, r.omega_m - 4.0 * r.g);
            const double wmax = s_wmax > 0 ? s_wmax : r.omega_m + 4.0 * r.g;
            if (!(wmax > wmin)) throw ValidationError("spectrum: need omega-max > omega-min");
            std::vector<double> w(s_points);
            for (std::size_t i = 0; i < s_points; ++i) {
                w[i] = wmin + (wmax - wmin) * static_cast<double>(i) / static_cast<double>(s_points - 1);
            }
            Table tab({"omega", "S_xm", "S_pm", "S_xat", "S_pat"});
            for (const auto& p : spectrum(m, w)) {
                tab.row({num(p.omega), num(p.density(0)), num(p.density(1)), num(p.density(2)), num(p.density(3))});
            }
            emit_table(run, tab, run.format("csv"));
        } else if (sub == coh || sub == cool) {
            SweepSpec spec = fig3_spec(cfg);
            std::string summary_path;
            SweepResult res;
            if (sub == coh) {
                spec.axis1 = parse_axis(coh_axis);
                res = sweep_coherent(spec, run.workers());
                summary_path = coh_summary;
            } else {
                spec.axis1 = parse_axis(cool_a1);
                spec.axis2 = parse_axis(cool_a2);
                res = sweep_cooling(spec, run.workers());
                summary_path = cool_summary;
            }
            emit_table(run, sweep_table(spec, res), run.format("csv"));
            if (!summary_path.empty()) {
                json summary{{"best", nullptr}};
                if (res.best) {
                    const SweepRecord& b = res.records[*res.best];
                    summary["best"] = record_json(b);
                    summary["best"][to_string(spec.axis1.param)] = b.x1;
                    if (spec.axis2) summary["best"][to_string(spec.axis2->param)] = b.x2;
                }
                std::size_t failed = 0;
                for (const auto& rec : res.records) failed += rec.ok() ? 0 : 1;
                summary["cells"] = res.records.size();
                summary["failed_cells"] = failed;
                run.emit_extra(summary_path, dump(summary));
            }
        } else if (sub == opt) {
            const Objective obj = objective_from(objective);
            std::vector<OptimizeBound> bounds;
            for (const auto& b : bounds_text) bounds.push_back(parse_bound(b));
            if (bounds.empty()) {
                bounds.push_back({SweepParam::Finesse, 50.0, 1000.0, AxisScale::Log});
                if (obj == Objective::MinOccupation) {
                    bounds.push_back({SweepParam::GammaCool, 1e4, 1e6, AxisScale::Log});
                }
            }
            OptimizeOptions oo;
            oo.workers = run.workers();
            const OptimumRecord best = optimize(obj, bounds, fig3_spec(cfg), oo);
            json point;
            for (std::size_t d = 0; d < bounds.size(); ++d) point[to_string(bounds[d].param)] = best.x[d];
            json trace = json::array();
            for (const auto& t : best.trace) trace.push_back({{"x", t.x}, {"value", t.value}});
            json out{{"objective", to_string(obj)}, {"optimum", point},         {"value", best.value},
                     {"record", record_json(best.record)}, {"evaluations", best.evaluations},
                     {"trace", trace}};
            run.emit(dump(out), "json");
        } else if (sub == repro) {
            Reproduction rep;
            if (recipe == "table1") {
                rep = reproduce_table1(cfg);
            } else if (recipe == "fig3") {
                rep = reproduce_fig3(cfg, run.workers());
            } else {
                rep = reproduce_fig4(cfg, run.workers());
            }
            emit_report("reproduce " + recipe, rep);
            const std::string fmt = run.format(rep.sweep.records.empty() ? "json" : "csv");
            if (fmt == "csv" && !rep.sweep.records.empty()) {
                emit_table(run, sweep_table(recipe == "fig3" ? fig3_spec(cfg) : fig4_spec(cfg), rep.sweep), "csv");
            } else {
                run.emit(dump(report_json(rep)), "json");
            }
            run.finish(cfg);
            return rep.all_pass() ? 0 : 2;
        }
        run.finish(cfg);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
