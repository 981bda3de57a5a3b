#pragma once

#include <cmath>
#include <numbers>

#include "viacoax/geometry.hpp"
#include "viacoax/units.hpp"

namespace viacoax {

/// TEM impedance of a coaxial line: eta0 / (2 pi sqrt(eps_r)) * ln(b/a).
inline double coax_impedance(Length a, Length b, double epsilon_r) {
    const double am = a.in_meters(), bm = b.in_meters();
    require(am > 0.0 && am < bm, "coax_impedance requires 0 < a < b");
    require(epsilon_r >= 1.0, "coax_impedance requires epsilon_r >= 1");
    return eta0() / (2.0 * std::numbers::pi * std::sqrt(epsilon_r)) * std::log(bm / am);
}

namespace detail {
inline double log_ratio_for(double z0, double epsilon_r) {
    return 2.0 * std::numbers::pi * z0 * std::sqrt(epsilon_r) / eta0();
}
}  // namespace detail

/// Outer radius giving `z0` for a fixed inner radius.
inline Length solve_outer_for_z0(Length a, double z0, double epsilon_r) {
    require(a.in_meters() > 0.0, "solve_outer_for_z0 requires a > 0");
    require(std::isfinite(z0) && z0 >= 0.0, "solve_outer_for_z0 requires z0 >= 0");
    require(epsilon_r >= 1.0, "solve_outer_for_z0 requires epsilon_r >= 1");
    return Length::meters(a.in_meters() * std::exp(detail::log_ratio_for(z0, epsilon_r)));
}

/// Inner (barrel) radius giving `z0` for a fixed outer radius.
inline Length solve_inner_for_z0(Length b, double z0, double epsilon_r) {
    require(b.in_meters() > 0.0, "solve_inner_for_z0 requires b > 0");
    require(std::isfinite(z0) && z0 >= 0.0, "solve_inner_for_z0 requires z0 >= 0");
    require(epsilon_r >= 1.0, "solve_inner_for_z0 requires epsilon_r >= 1");
    return Length::meters(b.in_meters() * std::exp(-detail::log_ratio_for(z0, epsilon_r)));
}

/// One uniform coaxial segment of the via stack. Z0 is computed on construction.
class CoaxSection {
public:
    CoaxSection(Length inner, Length outer, Material material, Length length)
        : inner_(inner), outer_(outer), material_(material), length_(length),
          z0_(coax_impedance(inner, outer, material.epsilon_r)) {
        require(material.loss_tangent >= 0.0, "loss_tangent >= 0 required");
        require(length.in_meters() >= 0.0, "section length >= 0 required");
    }

    /// Section with an explicitly prescribed impedance (ideal feed line).
    static CoaxSection with_impedance(double z0, Length outer, Material material, Length length) {
        return CoaxSection(solve_inner_for_z0(outer, z0, material.epsilon_r), outer, material,
                           length);
    }

    Length inner_radius() const { return inner_; }
    Length outer_radius() const { return outer_; }
    const Material& material() const { return material_; }
    Length length() const { return length_; }
    double z0() const { return z0_; }

private:
    Length inner_;
    Length outer_;
    Material material_;
    Length length_;
    double z0_;
};

}  // namespace viacoax
