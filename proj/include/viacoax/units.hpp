#pragma once

#include <cmath>
#include <compare>
#include <numbers>
#include <stdexcept>
#include <string>

namespace viacoax {

/// Fixed SI constants. mu0 is the CODATA 2018 value, not the legacy 4*pi*1e-7.
namespace constants {
inline constexpr double c0 = 299792458.0;
inline constexpr double mu0 = 1.25663706212e-6;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double meters_per_mil = 25.4e-6;
inline constexpr double neper_to_db = 8.685889638065036;  // 20 / ln(10)
}  // namespace constants

/// Free-space wave impedance sqrt(mu0/eps0), ~376.7303 ohm.
inline double eta0() {
    static const double value = std::sqrt(constants::mu0 / constants::eps0);
    return value;
}

/// Thrown when a caller violates a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw PreconditionError(message);
}

/// A physical length. Stored in meters; mils and millimeters only at I/O edges.
class Length {
public:
    constexpr Length() = default;

    static Length meters(double m) {
        require(std::isfinite(m), "length must be finite");
        return Length(m);
    }
    static Length mils(double mil) {
        require(std::isfinite(mil), "length in mils must be finite");
        return Length(mil * constants::meters_per_mil);
    }
    static Length millimeters(double mm) {
        require(std::isfinite(mm), "length in millimeters must be finite");
        return Length(mm * 1e-3);
    }

    constexpr double in_meters() const { return m_; }
    constexpr double in_mils() const { return m_ / constants::meters_per_mil; }
    constexpr double in_millimeters() const { return m_ * 1e3; }

    constexpr auto operator<=>(const Length&) const = default;

    friend Length operator*(double s, Length l) { return Length::meters(s * l.m_); }
    friend Length operator*(Length l, double s) { return s * l; }
    friend Length operator+(Length x, Length y) { return Length::meters(x.m_ + y.m_); }

private:
    constexpr explicit Length(double m) : m_(m) {}
    double m_ = 0.0;
};

inline Length mil_to_m(double mils) { return Length::mils(mils); }

inline namespace literals {
inline Length operator""_mil(long double v) { return Length::mils(static_cast<double>(v)); }
inline Length operator""_mil(unsigned long long v) { return Length::mils(static_cast<double>(v)); }
}  // namespace literals

}  // namespace viacoax
