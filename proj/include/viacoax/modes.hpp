#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "viacoax/bessel.hpp"
#include "viacoax/units.hpp"

namespace viacoax {

/// Higher-order coaxial waveguide mode. TM0n uses n >= 1 (TM01 is the first root).
struct Mode {
    enum class Family { TE11, TM0n };
    Family family = Family::TE11;
    int n = 1;

    static constexpr Mode te11() { return {Family::TE11, 1}; }
    static constexpr Mode tm0n(int n) { return {Family::TM0n, n}; }

    std::string label() const {
        return family == Family::TE11 ? "TE11" : "TM0" + std::to_string(n);
    }
    bool operator==(const Mode&) const = default;
};

enum class CutoffMethod { Approximate, ExactBesselRoot };

inline const char* to_string(CutoffMethod m) {
    return m == CutoffMethod::Approximate ? "approximate" : "exact";
}

struct ModeCutoff {
    Mode mode;
    double kc = 0.0;  // rad/m
    double fc = 0.0;  // Hz
    CutoffMethod method = CutoffMethod::Approximate;
};

/// No sign change of the characteristic function inside the scan range.
class RootNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// TE11 cutoff wavenumber estimate 2/(a+b).
inline double kc_approx(Length a, Length b) {
    const double am = a.in_meters(), bm = b.in_meters();
    require(am > 0.0 && am <= bm, "kc_approx requires 0 < a <= b");
    return 2.0 / (am + bm);
}

/// fc = c kc / (2 pi sqrt(eps_r)).
inline double cutoff_frequency(double kc, double epsilon_r) {
    require(std::isfinite(kc) && kc > 0.0, "cutoff_frequency requires kc > 0");
    require(epsilon_r >= 1.0, "cutoff_frequency requires epsilon_r >= 1");
    return constants::c0 * kc / (2.0 * std::numbers::pi * std::sqrt(epsilon_r));
}

/// Dielectric wavenumber k = 2 pi f sqrt(eps_r) / c.
inline double wavenumber(double f, double epsilon_r) {
    return 2.0 * std::numbers::pi * f * std::sqrt(epsilon_r) / constants::c0;
}

/// Characteristic function whose positive roots are the cutoff wavenumbers.
/// TM0n: J0(ka)Y0(kb) - J0(kb)Y0(ka). TE11: J1'(ka)Y1'(kb) - J1'(kb)Y1'(ka).
inline double characteristic(Mode mode, double kc, double a, double b) {
    using namespace bessel;
    if (mode.family == Mode::Family::TM0n) {
        return j0(kc * a) * y0(kc * b) - j0(kc * b) * y0(kc * a);
    }
    return j1_prime(kc * a) * y1_prime(kc * b) - j1_prime(kc * b) * y1_prime(kc * a);
}

/// Magnitude scale of the characteristic function near kc (sum of term magnitudes).
inline double characteristic_scale(Mode mode, double kc, double a, double b) {
    using namespace bessel;
    if (mode.family == Mode::Family::TM0n) {
        return std::fabs(j0(kc * a) * y0(kc * b)) + std::fabs(j0(kc * b) * y0(kc * a));
    }
    return std::fabs(j1_prime(kc * a) * y1_prime(kc * b)) +
           std::fabs(j1_prime(kc * b) * y1_prime(kc * a));
}

struct RootBracket {
    double lo = 0.0;
    double hi = 0.0;
    double kc = 0.0;
};

/// Scan (0, 20 pi/(b-a)] in steps of pi/(100(b-a)), then bisect the selected
/// sign change to 1e-12 relative width. Returns the final bracket.
inline RootBracket kc_exact_bracket(Mode mode, Length a, Length b) {
    const double am = a.in_meters(), bm = b.in_meters();
    require(am > 0.0 && am < bm, "kc_exact requires 0 < a < b");
    require(mode.family == Mode::Family::TE11 || mode.n >= 1, "TM0n requires n >= 1");

    const double gap = bm - am;
    const double step = std::numbers::pi / (100.0 * gap);
    const double k_max = 20.0 * std::numbers::pi / gap;
    const int wanted = mode.family == Mode::Family::TE11 ? 1 : mode.n;

    auto f = [&](double k) { return characteristic(mode, k, am, bm); };

    int found = 0;
    double k_prev = step * 1e-3;
    double f_prev = f(k_prev);
    const int steps = static_cast<int>(std::ceil(k_max / step));
    for (int i = 1; i <= steps; ++i) {
        const double k = std::min(i * step, k_max);
        const double fk = f(k);
        if (fk == 0.0 || std::signbit(fk) != std::signbit(f_prev)) {
            if (++found == wanted) {
                double lo = k_prev, hi = k, flo = f_prev;
                if (fk == 0.0) return {k, k, k};
                while (hi - lo > 1e-12 * hi) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = f(mid);
                    if (fm == 0.0) return {mid, mid, mid};
                    if (std::signbit(fm) == std::signbit(flo)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return {lo, hi, 0.5 * (lo + hi)};
            }
        }
        k_prev = k;
        f_prev = fk;
    }
    throw RootNotFound(mode.label() + " root not found in (0, 20*pi/(b-a)]");
}

inline double kc_exact(Mode mode, Length a, Length b) { return kc_exact_bracket(mode, a, b).kc; }

inline ModeCutoff approximate_cutoff(Length a, Length b, double epsilon_r) {
    const double kc = kc_approx(a, b);
    return {Mode::te11(), kc, cutoff_frequency(kc, epsilon_r), CutoffMethod::Approximate};
}

inline ModeCutoff exact_cutoff(Mode mode, Length a, Length b, double epsilon_r) {
    const double kc = kc_exact(mode, a, b);
    return {mode, kc, cutoff_frequency(kc, epsilon_r), CutoffMethod::ExactBesselRoot};
}

/// Re(gamma) of a mode below cutoff: sqrt(kc^2 - k^2); zero at and above cutoff.
inline double evanescent_alpha(double kc, double f, double epsilon_r) {
    require(std::isfinite(kc) && kc > 0.0, "evanescent_alpha requires kc > 0");
    require(std::isfinite(f) && f >= 0.0, "evanescent_alpha requires f >= 0");
    require(epsilon_r >= 1.0, "evanescent_alpha requires epsilon_r >= 1");
    const double k = wavenumber(f, epsilon_r);
    // k(fc) reproduces kc only to rounding; treat that as exactly at cutoff.
    if (kc - k <= 8.0 * std::numeric_limits<double>::epsilon() * kc) return 0.0;
    return std::sqrt((kc - k) * (kc + k));
}

}  // namespace viacoax
