#pragma once

// Integer-order Bessel functions of the first and second kind, orders 0 and 1.
//
// x <= kSeriesLimit: ascending power series evaluated in extended precision
// (the 80-bit long double absorbs the cancellation of the alternating terms).
// x >  kSeriesLimit: Hankel asymptotic expansion, summed until the terms stop
// shrinking. Absolute error stays below 1e-12 on [1e-3, 1e4].

#include <cmath>
#include <numbers>

#include "viacoax/units.hpp"

namespace viacoax::bessel {

enum class Kind { J0, J1, Y0, Y1, J1prime, Y1prime };

namespace detail {

using real = long double;

inline constexpr double kSeriesLimit = 17.0;
inline constexpr real kEulerGamma = 0.577215664901532860606512090082402431L;
inline constexpr real kPi = 3.141592653589793238462643383279502884L;

struct SeriesPair {
    real j;
    real y;
};

// J0 and Y0 from A&S 9.1.12 / 9.1.13.
inline SeriesPair series_order0(real x) {
    const real q = x * x / 4;
    real term = 1;  // (-q)^k / (k!)^2
    real j = 1;
    real harmonic = 0;
    real ysum = 0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<real>(k) * k);
        harmonic += 1.0L / k;
        j += term;
        ysum -= term * harmonic;
        if (std::fabs(term) * (1 + harmonic) < 1e-22L * (1 + std::fabs(j))) break;
    }
    const real y = (2 / kPi) * ((std::log(x / 2) + kEulerGamma) * j + ysum);
    return {j, y};
}

// J1 and Y1 from A&S 9.1.10 / 9.1.11, with psi(n+1) = H_n - gamma.
inline SeriesPair series_order1(real x) {
    const real h = x / 2;
    const real q = h * h;
    real term = h;  // (-1)^k h^(2k+1) / (k! (k+1)!)
    real j = term;
    real hk = 0;      // H_k
    real hk1 = 1;     // H_{k+1}
    real psi_sum = (hk - kEulerGamma) + (hk1 - kEulerGamma);
    real ysum = psi_sum * term;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<real>(k) * (k + 1));
        hk += 1.0L / k;
        hk1 += 1.0L / (k + 1);
        psi_sum = (hk - kEulerGamma) + (hk1 - kEulerGamma);
        j += term;
        ysum += psi_sum * term;
        if (std::fabs(term) * (1 + std::fabs(psi_sum)) < 1e-22L * (1 + std::fabs(j))) break;
    }
    const real y = -2 / (kPi * x) + (2 / kPi) * std::log(h) * j - ysum / kPi;
    return {j, y};
}

// Hankel expansion (A&S 9.2.5 - 9.2.10) for order nu in {0, 1}.
inline SeriesPair asymptotic(int nu, real x) {
    const real mu = 4.0L * nu * nu;
    const real z8 = 8 * x;
    real p = 1;
    real q = 0;
    real term = 1;  // a_k(nu) / x^k, sign handled below
    real last = INFINITY;
    for (int k = 1; k < 200; ++k) {
        const real odd = 2 * k - 1;
        term *= (mu - odd * odd) / (k * z8);
        const real mag = std::fabs(term);
        if (mag > last || mag < 1e-24L) break;
        last = mag;
        // k odd -> Q terms with sign (-1)^((k-1)/2); k even -> P terms with sign (-1)^(k/2)
        if (k % 2 == 1) {
            q += ((k / 2) % 2 == 0) ? term : -term;
        } else {
            p += ((k / 2) % 2 == 0) ? term : -term;
        }
    }
    // chi = x - (nu/2 + 1/4) pi; expand cos/sin of the difference so the large
    // argument enters libm unreduced.
    const real phase = (nu * 0.5L + 0.25L) * kPi;
    const real cx = std::cos(x), sx = std::sin(x);
    const real cp = std::cos(phase), sp = std::sin(phase);
    const real cos_chi = cx * cp + sx * sp;
    const real sin_chi = sx * cp - cx * sp;
    const real scale = std::sqrt(2 / (kPi * x));
    return {scale * (p * cos_chi - q * sin_chi), scale * (p * sin_chi + q * cos_chi)};
}

inline SeriesPair order0(double x) {
    return x <= kSeriesLimit ? series_order0(x) : asymptotic(0, x);
}
inline SeriesPair order1(double x) {
    return x <= kSeriesLimit ? series_order1(x) : asymptotic(1, x);
}

}  // namespace detail

inline double j0(double x) {
    require(std::isfinite(x) && x >= 0.0, "J0 requires finite x >= 0");
    if (x == 0.0) return 1.0;
    return static_cast<double>(detail::order0(x).j);
}

inline double j1(double x) {
    require(std::isfinite(x) && x >= 0.0, "J1 requires finite x >= 0");
    if (x == 0.0) return 0.0;
    return static_cast<double>(detail::order1(x).j);
}

inline double y0(double x) {
    require(std::isfinite(x) && x > 0.0, "Y0 requires finite x > 0");
    return static_cast<double>(detail::order0(x).y);
}

inline double y1(double x) {
    require(std::isfinite(x) && x > 0.0, "Y1 requires finite x > 0");
    return static_cast<double>(detail::order1(x).y);
}

/// J1'(x) = J0(x) - J1(x)/x; J1'(0) = 1/2.
inline double j1_prime(double x) {
    require(std::isfinite(x) && x >= 0.0, "J1' requires finite x >= 0");
    if (x == 0.0) return 0.5;
    const auto p0 = detail::order0(x);
    const auto p1 = detail::order1(x);
    return static_cast<double>(p0.j - p1.j / x);
}

/// Y1'(x) = Y0(x) - Y1(x)/x.
inline double y1_prime(double x) {
    require(std::isfinite(x) && x > 0.0, "Y1' requires finite x > 0");
    const auto p0 = detail::order0(x);
    const auto p1 = detail::order1(x);
    return static_cast<double>(p0.y - p1.y / x);
}

inline double evaluate(Kind kind, double x) {
    switch (kind) {
        case Kind::J0: return j0(x);
        case Kind::J1: return j1(x);
        case Kind::Y0: return y0(x);
        case Kind::Y1: return y1(x);
        case Kind::J1prime: return j1_prime(x);
        case Kind::Y1prime: return y1_prime(x);
    }
    throw PreconditionError("unknown Bessel kind");
}

}  // namespace viacoax::bessel
