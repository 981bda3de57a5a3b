#pragma once

// Design flow for a stitched via: pick the free radius from a target
// impedance, then check higher-order-mode headroom and the TEM cascade's
// -10 dB bandwidth against the frequency of interest.

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viacoax/cascade.hpp"
#include "viacoax/coax.hpp"
#include "viacoax/format.hpp"
#include "viacoax/geometry.hpp"
#include "viacoax/modes.hpp"

namespace viacoax {

/// The requested impedance cannot be reached inside the allowed geometry.
class InfeasibleDesign : public std::runtime_error {
public:
    InfeasibleDesign(std::string constraint, const std::string& what)
        : std::runtime_error(constraint + ": " + what), constraint_(std::move(constraint)) {}
    const std::string& constraint() const { return constraint_; }

private:
    std::string constraint_;
};

struct DesignSpec {
    double target_z0 = 50.0;
    double f_max = 67e9;
    std::optional<double> epsilon_r;  // overrides the template material
    bool free_barrel = false;
    bool free_outer = false;
    std::optional<Length> barrel_radius;     // fixed a; template value when absent
    std::optional<Length> outer_radius;      // fixed b; template ring radius when absent
    std::optional<Length> max_outer_radius;  // hard cap on b
    Length min_barrel_radius;                // manufacturing floor on a
    Length min_antipad_radius;               // manufacturing floor on b
    std::optional<double> z_ref;             // cascade reference; target_z0 when absent
    double threshold_db = -10.0;
    Sweep sweep = default_sweep();
};

struct LayerReport {
    std::string name;
    Length outer_radius;
    double z0 = 0.0;
    ModeCutoff te11_approx;
    ModeCutoff te11_exact;
    ModeCutoff tm01_exact;
};

struct DesignReport {
    ViaGeometry geometry;
    std::vector<LayerReport> layers;
    double z_ref = 50.0;
    double f_max = 0.0;
    double threshold_db = -10.0;
    double effective_bandwidth = 0.0;
    double min_te11_fc = 0.0;  // exact
    double mode_margin = 0.0;  // min_te11_fc / f_max
    bool pass = false;
    std::vector<Diagnostic> diagnostics;
    FrequencyResponse response;
};

/// Fills a report for a fixed geometry. Verdict: pass iff the lowest exact
/// TE11 cutoff exceeds f_max, the cascade bandwidth reaches f_max, and no
/// error diagnostics exist.
inline DesignReport evaluate_design(const ViaGeometry& g, double f_max, double z_ref,
                                    const Sweep& sweep = default_sweep(), double threshold_db = -10.0) {
    require(std::isfinite(f_max) && f_max > 0.0, "f_max must be > 0");
    DesignReport rep;
    rep.geometry = g;
    rep.diagnostics = validate(g);
    rep.z_ref = z_ref;
    rep.f_max = f_max;
    rep.threshold_db = threshold_db;
    if (has_errors(rep.diagnostics)) return rep;

    auto cascade = cascade_s_params(g, sweep, z_ref);
    rep.min_te11_fc = std::numeric_limits<double>::infinity();
    for (const auto& seg : cascade.advisory.segments) {
        rep.layers.push_back({seg.name, seg.outer_radius, seg.z0, seg.te11_approx, seg.te11.cutoff,
                              seg.tm01.cutoff});
        rep.min_te11_fc = std::min(rep.min_te11_fc, seg.te11.cutoff.fc);
    }
    rep.effective_bandwidth = effective_bandwidth(cascade.response, threshold_db);
    rep.mode_margin = rep.min_te11_fc / f_max;
    rep.pass = rep.min_te11_fc > f_max && rep.effective_bandwidth >= f_max;
    rep.response = std::move(cascade.response);
    return rep;
}

namespace detail {
inline std::string mil_text(Length l) { return fmt9(l.in_mils()) + " mil"; }
}  // namespace detail

/// Solves the free radius (or radii) for the target impedance, applies
/// manufacturing floors and the outer-radius cap, and evaluates the result.
///
/// Floors clamp with a diagnostic when another free radius can absorb the
/// change or when only the achieved impedance suffers; a target that needs a
/// barrel below its floor or an outer radius above its cap is infeasible.
inline DesignReport design_via(const DesignSpec& spec, const ViaGeometry& tmpl) {
    require(std::isfinite(spec.target_z0) && spec.target_z0 > 0.0, "target_z0 must be > 0");
    require(std::isfinite(spec.f_max) && spec.f_max > 0.0, "f_max must be > 0");
    require(spec.free_barrel || spec.free_outer, "at least one free parameter is required");

    const double er = spec.epsilon_r.value_or(tmpl.material.epsilon_r);
    require(er >= 1.0, "epsilon_r must be >= 1");
    const double z0 = spec.target_z0;
    const double cap = spec.max_outer_radius ? spec.max_outer_radius->in_meters()
                                             : std::numeric_limits<double>::infinity();
    const Length a_floor = spec.min_barrel_radius;
    const Length b_floor = spec.min_antipad_radius;

    std::vector<Diagnostic> notes;
    auto note = [&](std::string field, std::string msg) {
        notes.push_back({Severity::Warning, std::move(field), std::move(msg)});
    };

    Length a = spec.barrel_radius.value_or(tmpl.barrel_radius);
    Length b = spec.outer_radius.value_or(tmpl.stitch_ring_radius);
    bool uniform_outer = spec.outer_radius.has_value() || spec.free_outer;

    if (!spec.free_barrel && a < a_floor) {
        note("barrel_radius", "fixed barrel radius " + detail::mil_text(a) + " clamped to floor " +
                                  detail::mil_text(a_floor));
        a = a_floor;
    }
    if (!spec.free_outer && b < b_floor) {
        note("outer_radius", "fixed outer radius " + detail::mil_text(b) + " clamped to floor " +
                                 detail::mil_text(b_floor));
        b = b_floor;
        uniform_outer = true;
    }

    if (spec.free_outer && !spec.free_barrel) {
        b = solve_outer_for_z0(a, z0, er);
        if (b.in_meters() > cap) {
            throw InfeasibleDesign("max_outer_radius", "target " + fmt9(z0) + " ohm needs b = " +
                                                           detail::mil_text(b) + " above the cap " +
                                                           detail::mil_text(*spec.max_outer_radius));
        }
        if (b < b_floor) {
            note("outer_radius", "solved outer radius " + detail::mil_text(b) + " clamped to floor " +
                                     detail::mil_text(b_floor));
            b = b_floor;
        }
    } else if (spec.free_barrel && !spec.free_outer) {
        a = solve_inner_for_z0(b, z0, er);
        if (a < a_floor) {
            throw InfeasibleDesign(
                "min_barrel_radius",
                "target " + fmt9(z0) + " ohm needs a = " + detail::mil_text(a) + " below the floor " +
                    detail::mil_text(a_floor) + "; highest reachable Z0 with b = " + detail::mil_text(b) +
                    " is " + fmt9(a_floor < b ? coax_impedance(a_floor, b, er) : 0.0) + " ohm");
        }
    } else {
        if (a < a_floor) a = a_floor;
        b = solve_outer_for_z0(a, z0, er);
        if (b.in_meters() > cap) {
            note("outer_radius", "outer radius " + detail::mil_text(b) + " clamped to cap " +
                                     detail::mil_text(*spec.max_outer_radius) + "; barrel re-solved");
            b = *spec.max_outer_radius;
            a = solve_inner_for_z0(b, z0, er);
            if (a < a_floor) {
                throw InfeasibleDesign("min_barrel_radius",
                                       "target " + fmt9(z0) + " ohm needs a = " + detail::mil_text(a) +
                                           " below the floor " + detail::mil_text(a_floor) +
                                           " with b at its cap " + detail::mil_text(b));
            }
        } else if (b < b_floor) {
            note("outer_radius", "outer radius " + detail::mil_text(b) + " clamped to floor " +
                                     detail::mil_text(b_floor) + "; barrel re-solved");
            b = b_floor;
            a = solve_inner_for_z0(b, z0, er);
        }
    }

    ViaGeometry g = tmpl;
    g.barrel_radius = a;
    g.material.epsilon_r = er;
    if (uniform_outer) {
        g.stitch_ring_radius = b;
        for (auto& layer : g.layers) layer.antipad_radius = b;
    }
    if (const auto errs = validate(g); has_errors(errs)) {
        std::string msg;
        for (const auto& d : errs)
            if (d.severity == Severity::Error) msg += (msg.empty() ? "" : "; ") + d.field + ": " + d.message;
        throw InfeasibleDesign("geometry", msg);
    }

    const double achieved = coax_impedance(a, b, er);
    if (std::fabs(achieved - z0) > 1e-6 * z0) {
        note("target_z0", "achieved Z0 " + fmt9(achieved) + " ohm differs from target " + fmt9(z0) + " ohm");
    }

    DesignReport rep = evaluate_design(g, spec.f_max, spec.z_ref.value_or(z0), spec.sweep, spec.threshold_db);
    rep.diagnostics.insert(rep.diagnostics.begin(), notes.begin(), notes.end());
    return rep;
}

struct LayerShift {
    std::string name;
    double te11_fc_before = 0.0;  // exact
    double te11_fc_after = 0.0;
    double te11_approx_ratio = 0.0;  // approximate fc after / before
    double tm01_fc_before = 0.0;
    double tm01_fc_after = 0.0;
    double z0_before = 0.0;
    double z0_after = 0.0;
    bool added_mismatch = false;  // |Z0 - z_ref| grew
};

struct ModulationResult {
    ViaGeometry geometry;
    DesignReport before;
    DesignReport after;
    std::vector<LayerShift> shifts;
};

/// Shrinks the anti-pad of the named layers to `inner_antipad_radius` and
/// reports the cutoff gain against the impedance penalty.
inline ModulationResult modulate_inner_antipad(const ViaGeometry& g, Length inner_antipad_radius,
                                               const std::vector<std::string>& inner_layer_names,
                                               double z_ref = 50.0, double f_max = 67e9,
                                               const Sweep& sweep = default_sweep(),
                                               double threshold_db = -10.0) {
    require(inner_antipad_radius > g.barrel_radius, "inner anti-pad radius must exceed the barrel radius");
    ViaGeometry out = g;
    for (const auto& name : inner_layer_names) {
        auto it = std::find_if(out.layers.begin(), out.layers.end(),
                               [&](const Layer& l) { return l.name == name; });
        require(it != out.layers.end(), "no layer named '" + name + "'");
        for (auto& layer : out.layers)
            if (layer.name == name) layer.antipad_radius = inner_antipad_radius;
    }
    require_valid(out);

    ModulationResult res{out, evaluate_design(g, f_max, z_ref, sweep, threshold_db),
                         evaluate_design(out, f_max, z_ref, sweep, threshold_db), {}};
    for (std::size_t i = 0; i < out.layers.size(); ++i) {
        const auto& lb = res.before.layers[i];
        const auto& la = res.after.layers[i];
        if (g.layers[i].antipad_radius == out.layers[i].antipad_radius &&
            std::find(inner_layer_names.begin(), inner_layer_names.end(), out.layers[i].name) ==
                inner_layer_names.end()) {
            continue;
        }
        LayerShift s;
        s.name = la.name;
        s.te11_fc_before = lb.te11_exact.fc;
        s.te11_fc_after = la.te11_exact.fc;
        s.te11_approx_ratio = la.te11_approx.fc / lb.te11_approx.fc;
        s.tm01_fc_before = lb.tm01_exact.fc;
        s.tm01_fc_after = la.tm01_exact.fc;
        s.z0_before = lb.z0;
        s.z0_after = la.z0;
        s.added_mismatch = std::fabs(la.z0 - z_ref) > std::fabs(lb.z0 - z_ref);
        res.shifts.push_back(s);
    }
    return res;
}

enum class TdrPolarity { Dip, Flat, Peak };

inline const char* to_string(TdrPolarity p) {
    switch (p) {
        case TdrPolarity::Dip: return "dip";
        case TdrPolarity::Flat: return "flat";
        case TdrPolarity::Peak: return "peak";
    }
    return "flat";
}

/// Expected TDR signature of a segment: below z_ref reads capacitive (dip),
/// above reads inductive (peak); within 0.5 ohm counts as flat.
inline TdrPolarity classify_polarity(double z0, double z_ref) {
    if (z0 < z_ref - 0.5) return TdrPolarity::Dip;
    if (z0 > z_ref + 0.5) return TdrPolarity::Peak;
    return TdrPolarity::Flat;
}

struct BarrelSweepRow {
    Length diameter;
    double z0 = 0.0;         // coax impedance at the stitch-ring radius
    double te11_fc = 0.0;    // lowest exact TE11 cutoff over the layers
    TdrPolarity polarity = TdrPolarity::Flat;
    double effective_bandwidth = 0.0;
};

inline std::vector<BarrelSweepRow> barrel_sweep(const ViaGeometry& g, const std::vector<Length>& diameters,
                                                double z_ref, const Sweep& sweep = default_sweep(),
                                                double threshold_db = -10.0) {
    std::vector<BarrelSweepRow> rows;
    rows.reserve(diameters.size());
    for (const Length d : diameters) {
        const Length a = 0.5 * d;
        require(a.in_meters() > 0.0, "barrel diameter must be > 0");
        for (const auto& layer : g.layers) {
            require(a < g.outer_radius(layer),
                    "barrel diameter " + detail::mil_text(d) + " does not fit inside layer '" + layer.name + "'");
        }
        ViaGeometry v = g;
        v.barrel_radius = a;
        require_valid(v);
        const auto cascade = cascade_s_params(v, sweep, z_ref);
        BarrelSweepRow row;
        row.diameter = d;
        row.z0 = coax_impedance(a, v.stitch_ring_radius, v.material.epsilon_r);
        row.te11_fc = std::numeric_limits<double>::infinity();
        for (const auto& seg : cascade.advisory.segments) row.te11_fc = std::min(row.te11_fc, seg.te11.cutoff.fc);
        row.polarity = classify_polarity(row.z0, z_ref);
        row.effective_bandwidth = effective_bandwidth(cascade.response, threshold_db);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace viacoax
