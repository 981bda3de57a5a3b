#pragma once

// JSON documents: geometry/stackup config, design spec, and report output.
// Inputs are strict; unknown keys are errors naming the key.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "viacoax/designer.hpp"
#include "viacoax/format.hpp"
#include "viacoax/geometry.hpp"

namespace viacoax::config {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

inline const json& need(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing required field '" + key + "' in " + where);
    return *it;
}

inline double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("field '" + key + "' must be finite");
    return d;
}

inline double need_number(const json& obj, const std::string& key, const std::string& where) {
    return number(need(obj, key, where), key);
}

inline std::optional<double> opt_number(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    return number(*it, key);
}

inline std::vector<double> sig9_all(std::span<const double> v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = sig9(v[i]);
    return out;
}

}  // namespace detail

inline ViaGeometry geometry_from_json(const json& j) {
    using namespace detail;
    if (!j.is_object()) throw ConfigError("geometry config must be a JSON object");
    reject_unknown(j, {"barrel_radius_mil", "stitch_ring_radius_mil", "stitch_count", "epsilon_r",
                       "loss_tangent", "layers"},
                   "geometry");
    ViaGeometry g;
    g.barrel_radius = Length::mils(need_number(j, "barrel_radius_mil", "geometry"));
    g.stitch_ring_radius = Length::mils(need_number(j, "stitch_ring_radius_mil", "geometry"));
    const json& count = need(j, "stitch_count", "geometry");
    if (!count.is_number_integer()) throw ConfigError("field 'stitch_count' must be an integer");
    g.stitch_count = count.get<int>();
    g.material.epsilon_r = need_number(j, "epsilon_r", "geometry");
    g.material.loss_tangent = opt_number(j, "loss_tangent").value_or(0.0);

    const json& layers = need(j, "layers", "geometry");
    if (!layers.is_array()) throw ConfigError("field 'layers' must be an array");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const json& lj = layers[i];
        const std::string where = "layers[" + std::to_string(i) + "]";
        if (!lj.is_object()) throw ConfigError(where + " must be an object");
        reject_unknown(lj, {"name", "thickness_mil", "antipad_radius_mil"}, where);
        const json& name = need(lj, "name", where);
        if (!name.is_string()) throw ConfigError("field 'name' in " + where + " must be a string");
        g.layers.push_back({name.get<std::string>(), Length::mils(need_number(lj, "thickness_mil", where)),
                            Length::mils(need_number(lj, "antipad_radius_mil", where))});
    }
    return g;
}

inline json geometry_to_json(const ViaGeometry& g) {
    json layers = json::array();
    for (const auto& l : g.layers) {
        layers.push_back({{"name", l.name},
                          {"thickness_mil", sig9(l.thickness.in_mils())},
                          {"antipad_radius_mil", sig9(l.antipad_radius.in_mils())}});
    }
    return {{"barrel_radius_mil", sig9(g.barrel_radius.in_mils())},
            {"stitch_ring_radius_mil", sig9(g.stitch_ring_radius.in_mils())},
            {"stitch_count", g.stitch_count},
            {"epsilon_r", sig9(g.material.epsilon_r)},
            {"loss_tangent", sig9(g.material.loss_tangent)},
            {"layers", layers}};
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

inline ViaGeometry load_geometry(const std::filesystem::path& path) {
    return geometry_from_json(read_json_file(path));
}

/// Design spec plus an optional embedded geometry template.
struct DesignInput {
    DesignSpec spec;
    std::optional<ViaGeometry> geometry;
};

inline DesignInput design_from_json(const json& j) {
    using namespace detail;
    if (!j.is_object()) throw ConfigError("design spec must be a JSON object");
    reject_unknown(j, {"target_z0_ohm", "f_max_ghz", "epsilon_r", "free", "barrel_radius_mil",
                       "outer_radius_mil", "max_outer_radius_mil", "min_barrel_radius_mil",
                       "min_antipad_radius_mil", "z_ref_ohm", "geometry"},
                   "design spec");
    DesignInput in;
    DesignSpec& s = in.spec;
    s.target_z0 = need_number(j, "target_z0_ohm", "design spec");
    if (!(s.target_z0 > 0.0)) throw ConfigError("field 'target_z0_ohm' must be > 0");
    s.f_max = need_number(j, "f_max_ghz", "design spec") * 1e9;
    if (!(s.f_max > 0.0)) throw ConfigError("field 'f_max_ghz' must be > 0");
    s.epsilon_r = opt_number(j, "epsilon_r");

    const json& free = need(j, "free", "design spec");
    if (!free.is_array()) throw ConfigError("field 'free' must be an array");
    for (const auto& f : free) {
        if (f == "barrel_radius") s.free_barrel = true;
        else if (f == "outer_radius") s.free_outer = true;
        else throw ConfigError("field 'free' accepts \"barrel_radius\" and \"outer_radius\", got " + f.dump());
    }
    if (!s.free_barrel && !s.free_outer) throw ConfigError("field 'free' must name at least one free parameter");

    auto mil = [&](const char* key) -> std::optional<Length> {
        if (auto v = opt_number(j, key)) return Length::mils(*v);
        return std::nullopt;
    };
    s.barrel_radius = mil("barrel_radius_mil");
    s.outer_radius = mil("outer_radius_mil");
    s.max_outer_radius = mil("max_outer_radius_mil");
    s.min_barrel_radius = mil("min_barrel_radius_mil").value_or(Length{});
    s.min_antipad_radius = mil("min_antipad_radius_mil").value_or(Length{});
    s.z_ref = opt_number(j, "z_ref_ohm");
    if (auto it = j.find("geometry"); it != j.end()) in.geometry = geometry_from_json(*it);
    return in;
}

inline json cutoff_to_json(const ModeCutoff& c) {
    return {{"mode", c.mode.label()}, {"method", to_string(c.method)}, {"kc_rad_per_m", sig9(c.kc)}, {"fc_hz", sig9(c.fc)}};
}

inline json diagnostics_to_json(const std::vector<Diagnostic>& diags) {
    json out = json::array();
    for (const auto& d : diags) {
        out.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                       {"field", d.field},
                       {"message", d.message}});
    }
    return out;
}

inline json report_to_json(const DesignReport& r) {
    json layers = json::array();
    for (const auto& l : r.layers) {
        layers.push_back({{"name", l.name},
                          {"outer_radius_mil", sig9(l.outer_radius.in_mils())},
                          {"z0_ohm", sig9(l.z0)},
                          {"te11_approx", cutoff_to_json(l.te11_approx)},
                          {"te11_exact", cutoff_to_json(l.te11_exact)},
                          {"tm01_exact", cutoff_to_json(l.tm01_exact)}});
    }
    return {{"geometry", geometry_to_json(r.geometry)},
            {"layers", layers},
            {"z_ref_ohm", sig9(r.z_ref)},
            {"f_max_hz", sig9(r.f_max)},
            {"threshold_db", sig9(r.threshold_db)},
            {"effective_bandwidth_hz", sig9(r.effective_bandwidth)},
            {"min_te11_fc_exact_hz", sig9(r.min_te11_fc)},
            {"mode_margin", sig9(r.mode_margin)},
            {"verdict", r.pass ? "pass" : "fail"},
            {"diagnostics", diagnostics_to_json(r.diagnostics)}};
}

inline json advisory_to_json(const ModeAdvisory& adv, std::span<const double> freqs) {
    using detail::sig9_all;
    json segs = json::array();
    for (const auto& s : adv.segments) {
        segs.push_back({{"name", s.name},
                        {"length_mil", sig9(s.length.in_mils())},
                        {"outer_radius_mil", sig9(s.outer_radius.in_mils())},
                        {"z0_ohm", sig9(s.z0)},
                        {"te11_approx", cutoff_to_json(s.te11_approx)},
                        {"te11_exact", cutoff_to_json(s.te11.cutoff)},
                        {"tm01_exact", cutoff_to_json(s.tm01.cutoff)},
                        {"te11_attenuation_db", sig9_all(s.te11.attenuation_db)},
                        {"tm01_attenuation_db", sig9_all(s.tm01.attenuation_db)}});
    }
    return {{"frequencies_hz", sig9_all(freqs)}, {"segments", segs}};
}

}  // namespace viacoax::config
