#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace viacoax {

/// Shortest form with 9 significant digits, '.' decimal separator regardless of locale.
inline std::string fmt9(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop negative zero
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

/// Locale-independent strict parse of a complete token.
inline std::optional<double> parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Value rounded to 9 significant digits, for serializers that print shortest form.
inline double sig9(double v) {
    if (!std::isfinite(v)) return v;
    return parse_double(fmt9(v)).value_or(v);
}

}  // namespace viacoax
