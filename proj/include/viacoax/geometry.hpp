#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "viacoax/units.hpp"

namespace viacoax {

/// Nonmagnetic dielectric; mu is always mu0.
struct Material {
    double epsilon_r = 1.0;
    double loss_tangent = 0.0;
};

struct Layer {
    std::string name;
    Length thickness;
    Length antipad_radius;
};

/// Signal via surrounded by a ring of stitching (ground) vias.
///
/// `stitch_ring_radius` is measured from the signal-via center to the *edge*
/// of the stitching vias; it plays the role of the coax outer radius.
struct ViaGeometry {
    Length barrel_radius;
    Length stitch_ring_radius;
    int stitch_count = 0;
    std::vector<Layer> layers;
    Material material;

    /// Outer radius seen by one layer: its anti-pad, clamped to the ring.
    Length outer_radius(const Layer& layer) const {
        return std::min(layer.antipad_radius, stitch_ring_radius);
    }
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity;
    std::string field;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

inline constexpr int kMinRecommendedStitchCount = 6;
inline constexpr double kAntipadMarginFactor = 1.2;

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

/// Checks every geometry invariant. Errors block computation; warnings are
/// advisory (too few stitching vias, anti-pad too tight for manufacturing).
inline std::vector<Diagnostic> validate(const ViaGeometry& g) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string field, std::string msg) {
        out.push_back({Severity::Error, std::move(field), std::move(msg)});
    };
    auto warn = [&](std::string field, std::string msg) {
        out.push_back({Severity::Warning, std::move(field), std::move(msg)});
    };

    const double a = g.barrel_radius.in_meters();
    const double ring = g.stitch_ring_radius.in_meters();

    if (!(a > 0.0)) error("barrel_radius", "barrel_radius > 0 violated");
    if (!(ring > 0.0)) error("stitch_ring_radius", "stitch_ring_radius > 0 violated");
    if (!(a < ring)) error("barrel_radius", "barrel_radius < stitch_ring_radius violated");

    if (g.stitch_count < 1) {
        error("stitch_count", "stitch_count >= 1 violated");
    } else if (g.stitch_count < kMinRecommendedStitchCount) {
        warn("stitch_count", "only " + std::to_string(g.stitch_count) +
                                 " stitching vias; the coaxial approximation assumes at least " +
                                 std::to_string(kMinRecommendedStitchCount));
    }

    if (!(g.material.epsilon_r >= 1.0)) error("epsilon_r", "epsilon_r >= 1 violated");
    if (!(g.material.loss_tangent >= 0.0)) error("loss_tangent", "loss_tangent >= 0 violated");

    if (g.layers.empty()) error("layers", "layers must contain at least one layer");

    for (std::size_t i = 0; i < g.layers.size(); ++i) {
        const Layer& layer = g.layers[i];
        const std::string field = "layers[" + std::to_string(i) + "]";
        const double t = layer.thickness.in_meters();
        const double r = layer.antipad_radius.in_meters();
        if (!(t > 0.0)) error(field + ".thickness", "thickness > 0 violated");
        if (!(r > 0.0)) {
            error(field + ".antipad_radius", "antipad_radius > 0 violated");
            continue;
        }
        if (!(a < r)) error(field + ".antipad_radius", "barrel_radius < antipad_radius violated");
        if (!(r <= ring)) {
            error(field + ".antipad_radius", "antipad_radius <= stitch_ring_radius violated");
        }
        if (a > 0.0 && a < r && r < kAntipadMarginFactor * a) {
            warn(field + ".antipad_radius", "antipad_radius below 1.2 x barrel_radius");
        }
    }
    return out;
}

/// Throws PreconditionError listing every error diagnostic.
inline void require_valid(const ViaGeometry& g) {
    std::string msg;
    for (const auto& d : validate(g)) {
        if (d.severity != Severity::Error) continue;
        if (!msg.empty()) msg += "; ";
        msg += d.field + ": " + d.message;
    }
    if (!msg.empty()) throw PreconditionError("invalid geometry: " + msg);
}

}  // namespace viacoax
