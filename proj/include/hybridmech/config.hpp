#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridmech/dynamics.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/params.hpp"

namespace hybridmech {

using json = nlohmann::json;

/// Everything a run needs. Missing keys keep their Table I defaults; unknown keys are
/// rejected.
struct Config {
    MembraneParams membrane = table1_membrane();
    AtomParams atoms = table1_atoms();
    CavityParams cavity = table1_cavity();
    CoolingSettings cooling{2.2e5};

    SystemParams system() const { return build_system(membrane, atoms, cavity); }
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& where,
                           const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ValidationError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ValidationError("config: unknown key '" + where + "." + key + "'");
    }
}

inline double number_at(const json& obj, const std::string& where, const std::string& key,
                        double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
    }
    throw ValidationError("config: '" + where + "." + key + "' must be a number");
}

inline std::optional<double> optional_at(const json& obj, const std::string& where,
                                         const std::string& key, std::optional<double> fallback) {
    if (!obj.contains(key)) return fallback;
    if (obj.at(key).is_null()) return std::nullopt;
    return number_at(obj, where, key, 0.0);
}

inline json number_json(double v) {
    if (std::isinf(v) && v > 0) return "inf";
    return v;
}

inline json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace detail

inline Config config_from_json(const json& doc) {
    using namespace detail;
    reject_unknown(doc, "<root>", {"membrane", "atoms", "cavity", "cooling"});
    Config c;

    if (doc.contains("membrane")) {
        const json& m = doc.at("membrane");
        reject_unknown(m, "membrane",
                       {"omega_m", "mass_M", "Q_m", "T0", "n_m", "d_m", "side_l", "abs2",
                        "r_m_override", "placement", "kappa_th", "K_th_override"});
        auto& p = c.membrane;
        p.omega_m = number_at(m, "membrane", "omega_m", p.omega_m);
        p.mass_M = number_at(m, "membrane", "mass_M", p.mass_M);
        p.Q_m = number_at(m, "membrane", "Q_m", p.Q_m);
        p.T0 = number_at(m, "membrane", "T0", p.T0);
        p.n_m = number_at(m, "membrane", "n_m", p.n_m);
        p.d_m = number_at(m, "membrane", "d_m", p.d_m);
        p.side_l = number_at(m, "membrane", "side_l", p.side_l);
        p.abs2 = number_at(m, "membrane", "abs2", p.abs2);
        p.r_m_override = optional_at(m, "membrane", "r_m_override", p.r_m_override);
        p.kappa_th = number_at(m, "membrane", "kappa_th", p.kappa_th);
        p.K_th_override = optional_at(m, "membrane", "K_th_override", p.K_th_override);
        if (m.contains("placement")) {
            const json& pl = m.at("placement");
            if (pl.is_string() && pl.get<std::string>() == "on_slope") {
                p.placement = Placement::on_slope();
            } else if (pl.is_object()) {
                reject_unknown(pl, "membrane.placement", {"at_position"});
                if (!pl.contains("at_position")) {
                    throw ValidationError("config: membrane.placement object needs 'at_position'");
                }
                p.placement = Placement::at_position(
                    number_at(pl, "membrane.placement", "at_position", 0.0));
            } else {
                throw ValidationError(
                    "config: membrane.placement must be \"on_slope\" or {\"at_position\": ell}");
            }
        }
    }

    if (doc.contains("atoms")) {
        const json& a = doc.at("atoms");
        reject_unknown(a, "atoms",
                       {"omega_at", "mass_m", "N", "delta", "mu", "gamma_se", "lambda_L",
                        "omega_L_listed"});
        auto& p = c.atoms;
        p.omega_at = number_at(a, "atoms", "omega_at", p.omega_at);
        p.mass_m = number_at(a, "atoms", "mass_m", p.mass_m);
        p.N = number_at(a, "atoms", "N", p.N);
        p.delta = number_at(a, "atoms", "delta", p.delta);
        p.mu = number_at(a, "atoms", "mu", p.mu);
        p.gamma_se = number_at(a, "atoms", "gamma_se", p.gamma_se);
        p.lambda_L = number_at(a, "atoms", "lambda_L", p.lambda_L);
        p.omega_L_listed = optional_at(a, "atoms", "omega_L_listed", p.omega_L_listed);
    }

    if (doc.contains("cavity")) {
        const json& v = doc.at("cavity");
        reject_unknown(v, "cavity",
                       {"finesse", "length_L", "mode_area", "power_P", "waist_membrane", "geometry"});
        auto& p = c.cavity;
        p.finesse = number_at(v, "cavity", "finesse", p.finesse);
        p.length_L = number_at(v, "cavity", "length_L", p.length_L);
        p.mode_area = number_at(v, "cavity", "mode_area", p.mode_area);
        p.power_P = number_at(v, "cavity", "power_P", p.power_P);
        p.waist_membrane = number_at(v, "cavity", "waist_membrane", p.waist_membrane);
        if (v.contains("geometry")) {
            const json& g = v.at("geometry");
            const std::string name = g.is_string() ? g.get<std::string>() : "";
            if (name == "membrane_in_middle") {
                p.geometry = Geometry::MembraneInMiddle;
            } else if (name == "movable_mirror") {
                p.geometry = Geometry::MovableMirror;
            } else {
                throw ValidationError(
                    "config: cavity.geometry must be \"membrane_in_middle\" or \"movable_mirror\"");
            }
        }
    }

    if (doc.contains("cooling")) {
        const json& v = doc.at("cooling");
        reject_unknown(v, "cooling", {"gamma_cool"});
        c.cooling.gamma_cool = number_at(v, "cooling", "gamma_cool", c.cooling.gamma_cool);
        if (!(c.cooling.gamma_cool >= 0.0) || !std::isfinite(c.cooling.gamma_cool)) {
            throw ValidationError("config: cooling.gamma_cool must be finite and >= 0");
        }
    }
    return c;
}

inline json config_to_json(const Config& c) {
    using detail::number_json;
    using detail::optional_json;
    const auto& m = c.membrane;
    const auto& a = c.atoms;
    const auto& v = c.cavity;
    json placement = m.placement.kind == Placement::Kind::OnSlope
                         ? json("on_slope")
                         : json{{"at_position", m.placement.ell}};
    return json{
        {"membrane",
         {{"omega_m", m.omega_m},
          {"mass_M", m.mass_M},
          {"Q_m", number_json(m.Q_m)},
          {"T0", m.T0},
          {"n_m", m.n_m},
          {"d_m", m.d_m},
          {"side_l", m.side_l},
          {"abs2", m.abs2},
          {"r_m_override", optional_json(m.r_m_override)},
          {"placement", placement},
          {"kappa_th", m.kappa_th},
          {"K_th_override", optional_json(m.K_th_override)}}},
        {"atoms",
         {{"omega_at", a.omega_at},
          {"mass_m", a.mass_m},
          {"N", a.N},
          {"delta", a.delta},
          {"mu", a.mu},
          {"gamma_se", a.gamma_se},
          {"lambda_L", a.lambda_L},
          {"omega_L_listed", optional_json(a.omega_L_listed)}}},
        {"cavity",
         {{"finesse", v.finesse},
          {"length_L", v.length_L},
          {"mode_area", v.mode_area},
          {"power_P", v.power_P},
          {"waist_membrane", v.waist_membrane},
          {"geometry", v.geometry == Geometry::MovableMirror ? "movable_mirror" : "membrane_in_middle"}}},
        {"cooling", {{"gamma_cool", c.cooling.gamma_cool}}},
    };
}

/// Applies "section.key=value" to a JSON document. The value is read as JSON when it
/// parses (numbers, null, objects) and as a plain string otherwise.
inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("--set expects key=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ValidationError("--set: malformed key path '" + path + "'");
        if (!node->is_object()) *node = json::object();
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("file not found: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    json doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded()) throw ValidationError("config: " + path + " is not valid JSON");
    return doc;
}

/// 64-bit FNV-1a over a byte string, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

/// Hash of the resolved configuration in canonical (sorted-key, compact) form.
inline std::string config_hash(const Config& c) { return fnv1a_hex(config_to_json(c).dump()); }

}  // namespace hybridmech
