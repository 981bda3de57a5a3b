#pragma once

// Step-response time-domain reflectometry from a sampled S11(f).
//
// The one-sided spectrum on a DC-anchored grid is windowed, shaped by a
// Gaussian filter with the requested 10-90% rise time, delayed by a small
// lead-in so the filter kernel stays causal on the output grid, zero padded
// 8x and inverse transformed (FFTW, real output). The impulse response is
// integrated into rho(t) and mapped to an impedance profile.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "viacoax/cascade.hpp"
#include "viacoax/format.hpp"

namespace viacoax {

struct Window {
    enum class Type { Kaiser, None };
    Type type = Type::Kaiser;
    double beta = 6.0;

    static Window kaiser(double beta) { return {Type::Kaiser, beta}; }
    static Window none() { return {Type::None, 0.0}; }

    std::string describe() const { return type == Type::None ? "none" : "kaiser:" + fmt9(beta); }
};

inline constexpr double kDefaultRiseTime = 15e-12;
inline constexpr int kZeroPadding = 8;

struct TdrTrace {
    std::vector<double> time;                  // s, uniform
    std::vector<double> rho;                   // step reflection
    std::vector<std::optional<double>> z;      // ohm; empty where |rho| >= 1
    double z_ref = 50.0;
    double rise_time = kDefaultRiseTime;
    Window window;

    double dt() const { return time.size() > 1 ? time[1] - time[0] : 0.0; }
};

/// |rho| within this of 1 is a full reflection (open or short); band-limit
/// leakage keeps a synthesized open a few 1e-6 short of 1.
inline constexpr double kFullReflectionTolerance = 1e-5;

/// z = z_ref (1 + rho) / (1 - rho); nullopt marks an unbounded impedance.
inline std::optional<double> impedance_from_rho(double rho, double z_ref) {
    if (!(std::fabs(rho) < 1.0 - kFullReflectionTolerance)) return std::nullopt;
    if (rho == 0.0) return z_ref;
    return z_ref * (1.0 + rho) / (1.0 - rho);
}

namespace detail {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using fftw_ptr = std::unique_ptr<T[], FftwFree>;

template <class T>
fftw_ptr<T> fftw_alloc(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!p) throw std::bad_alloc();
    return fftw_ptr<T>(p);
}

// The FFTW planner is not reentrant.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// Real inverse transform (unnormalized) of a half spectrum of length n/2+1.
inline std::vector<double> inverse_real_fft(std::span<const std::complex<double>> half, std::size_t n) {
    auto in = fftw_alloc<fftw_complex>(n / 2 + 1);
    auto out = fftw_alloc<double>(n);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < n / 2 + 1; ++k) {
        const auto v = k < half.size() ? half[k] : std::complex<double>{};
        in[k][0] = v.real();
        in[k][1] = v.imag();
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return std::vector<double>(out.get(), out.get() + n);
}

/// Forward real transform returning n/2+1 bins.
inline std::vector<std::complex<double>> forward_real_fft(std::span<const double> x, std::size_t n) {
    auto in = fftw_alloc<double>(n);
    auto out = fftw_alloc<fftw_complex>(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < n; ++i) in[i] = i < x.size() ? x[i] : 0.0;
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<std::complex<double>> res(n / 2 + 1);
    for (std::size_t k = 0; k < res.size(); ++k) res[k] = {out[k][0], out[k][1]};
    return res;
}

inline double window_weight(const Window& w, std::size_t k, std::size_t n) {
    if (w.type == Window::Type::None) return 1.0;
    const double r = static_cast<double>(k) / static_cast<double>(n);
    return std::cyl_bessel_i(0.0, w.beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
           std::cyl_bessel_i(0.0, w.beta);
}

// 10-90% rise of an erf step is 2 * probit(0.9) * sigma.
inline constexpr double kGaussianRiseFactor = 2.0 * 1.2815515655446004;

}  // namespace detail

/// One-sided S11 spectrum on the grid k*df, k = 0..N-1, with the DC bin
/// filled from Re(S11) at the lowest measured frequency when absent. A grid
/// whose first point is not a whole number of steps above DC is resampled onto
/// DC-aligned bins by linear interpolation.
inline std::vector<std::complex<double>> dc_anchored_s11(const FrequencyResponse& r, double& df) {
    require(r.size() >= 2 && r.samples.size() == r.size(), "TDR requires at least two samples");
    require(is_uniform_grid(r.frequencies), "TDR requires a uniform frequency grid");
    const double f0 = r.frequencies.front();
    df = (r.frequencies.back() - f0) / static_cast<double>(r.size() - 1);
    const std::complex<double> dc(r.samples.front().s11.real(), 0.0);
    const double offset = f0 / df;
    const double m0 = std::round(offset);

    if (std::fabs(offset - m0) <= 1e-6 * std::max(1.0, m0)) {
        const auto first = static_cast<std::size_t>(m0);
        std::vector<std::complex<double>> h(first + r.size());
        h[0] = dc;
        for (std::size_t k = 1; k < first; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(first);
            h[k] = (1.0 - t) * dc + t * r.samples.front().s11;
        }
        for (std::size_t i = (first == 0 ? 1 : 0); i < r.size(); ++i) h[first + i] = r.samples[i].s11;
        return h;
    }

    const auto top = static_cast<std::size_t>(std::floor(r.frequencies.back() / df + 1e-9));
    std::vector<std::complex<double>> h(top + 1);
    h[0] = dc;
    for (std::size_t k = 1; k <= top; ++k) {
        const double f = static_cast<double>(k) * df;
        if (f <= f0) {
            const double t = f / f0;
            h[k] = (1.0 - t) * dc + t * r.samples.front().s11;
            continue;
        }
        const double pos = std::min((f - f0) / df, static_cast<double>(r.size() - 1));
        const auto i = std::min(static_cast<std::size_t>(pos), r.size() - 2);
        const double t = pos - static_cast<double>(i);
        h[k] = (1.0 - t) * r.samples[i].s11 + t * r.samples[i + 1].s11;
    }
    return h;
}

inline TdrTrace s11_to_tdr(const FrequencyResponse& response, double rise_time = kDefaultRiseTime,
                           Window window = Window::kaiser(6.0)) {
    require(std::isfinite(rise_time) && rise_time > 0.0, "rise_time must be > 0");
    require(window.type == Window::Type::None || (std::isfinite(window.beta) && window.beta >= 0.0),
            "Kaiser beta must be >= 0");
    double df = 0.0;
    const auto spectrum = dc_anchored_s11(response, df);
    const std::size_t n_bins = spectrum.size();
    const std::size_t n_time = 2 * kZeroPadding * n_bins;
    const double dt = 1.0 / (static_cast<double>(n_time) * df);
    const double f_top = df * static_cast<double>(n_bins);

    const double sigma = rise_time / detail::kGaussianRiseFactor;
    const double lead = 3.0 * rise_time + 4.0 / f_top;

    std::vector<std::complex<double>> shaped(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double f = df * static_cast<double>(k);
        const double gauss = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * sigma * sigma * f * f);
        const auto delay = std::polar(1.0, -2.0 * std::numbers::pi * f * lead);
        shaped[k] = spectrum[k] * (gauss * detail::window_weight(window, k, n_bins)) * delay;
    }
    shaped[0] = {shaped[0].real(), 0.0};

    const auto impulse = detail::inverse_real_fft(shaped, n_time);

    TdrTrace trace;
    trace.z_ref = response.z_ref;
    trace.rise_time = rise_time;
    trace.window = window;
    const std::size_t n_out = n_time / 2;
    trace.time.resize(n_out);
    trace.rho.resize(n_out);
    trace.z.resize(n_out);
    const double scale = 1.0 / static_cast<double>(n_time);
    double acc = 0.0;
    for (std::size_t n = 0; n < n_out; ++n) {
        acc += impulse[n] * scale;
        trace.time[n] = static_cast<double>(n) * dt - lead;
        trace.rho[n] = acc;
        trace.z[n] = impedance_from_rho(acc, response.z_ref);
    }
    return trace;
}

struct TraceComparison {
    double max_dz = 0.0;        // ohm, over the aligned overlap
    double delay_offset = 0.0;  // s; positive when `b` lags `a`
    long lag_samples = 0;
    std::size_t compared_points = 0;
};

namespace detail {
inline double interp(std::span<const double> t, std::span<const double> y, double x) {
    if (x <= t.front()) return y.front();
    if (x >= t.back()) return y.back();
    const double pos = (x - t.front()) / (t[1] - t[0]);
    const double nearest = std::round(pos);
    if (std::fabs(pos - nearest) < 1e-9) return y[static_cast<std::size_t>(nearest)];
    const auto i = std::min(static_cast<std::size_t>(pos), t.size() - 2);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * y[i] + w * y[i + 1];
}
}  // namespace detail

/// Aligns `b` to `a` by cross-correlating d(rho)/dt, then reports the largest
/// impedance difference over the aligned overlap. `b` is resampled onto the
/// time grid of `a` when the steps differ.
inline TraceComparison compare_traces(const TdrTrace& a, const TdrTrace& b) {
    require(a.time.size() >= 2 && b.time.size() >= 2, "traces need at least two samples");
    require(std::fabs(a.rise_time - b.rise_time) <= 1e-9 * a.rise_time,
            "traces must share the same rise time");
    const double lo = std::max(a.time.front(), b.time.front());
    const double hi = std::min(a.time.back(), b.time.back());
    require(hi > lo, "trace time spans do not overlap");

    const double dt = a.dt();
    std::size_t start = 0;
    while (start < a.time.size() && a.time[start] < lo - 1e-6 * dt) ++start;
    std::size_t stop = start;
    while (stop < a.time.size() && a.time[stop] <= hi + 1e-6 * dt) ++stop;
    const std::size_t m = stop - start;
    require(m >= 2, "trace overlap shorter than two samples");

    std::vector<double> ra(m), rb(m), zb(m);
    std::vector<bool> zb_ok(m);
    std::vector<double> bz_raw(b.z.size());
    std::vector<double> bz_mask(b.z.size());
    for (std::size_t i = 0; i < b.z.size(); ++i) {
        bz_raw[i] = b.z[i].value_or(0.0);
        bz_mask[i] = b.z[i] ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double t = a.time[start + i];
        ra[i] = a.rho[start + i];
        rb[i] = detail::interp(b.time, b.rho, t);
        zb[i] = detail::interp(b.time, bz_raw, t);
        zb_ok[i] = detail::interp(b.time, bz_mask, t) >= 1.0;
    }

    std::vector<double> da(m, 0.0), db(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        da[i] = (ra[i] - ra[i - 1]) / dt;
        db[i] = (rb[i] - rb[i - 1]) / dt;
    }

    const std::size_t n_fft = 2 * m;
    const auto fa = detail::forward_real_fft(da, n_fft);
    const auto fb = detail::forward_real_fft(db, n_fft);
    std::vector<std::complex<double>> prod(fa.size());
    for (std::size_t k = 0; k < fa.size(); ++k) prod[k] = std::conj(fa[k]) * fb[k];
    const auto corr = detail::inverse_real_fft(prod, n_fft);

    long best_lag = 0;
    double best = 0.0;
    const long max_lag = static_cast<long>(m) - 1;
    for (long lag = 0; lag <= max_lag; ++lag) {
        for (long s : {lag, -lag}) {
            const double c = corr[static_cast<std::size_t>(s >= 0 ? s : static_cast<long>(n_fft) + s)];
            if (c > best * (1.0 + 1e-9) + 1e-300) {
                best = c;
                best_lag = s;
            }
            if (lag == 0) break;
        }
    }

    TraceComparison out;
    out.lag_samples = best_lag;
    out.delay_offset = static_cast<double>(best_lag) * dt;
    for (std::size_t i = 0; i < m; ++i) {
        const long j = static_cast<long>(i) + best_lag;
        if (j < 0 || j >= static_cast<long>(m)) continue;
        const auto& za = a.z[start + i];
        if (!za || !zb_ok[static_cast<std::size_t>(j)]) continue;
        out.max_dz = std::max(out.max_dz, std::fabs(*za - zb[static_cast<std::size_t>(j)]));
        ++out.compared_points;
    }
    return out;
}

/// CSV with columns time_s,rho,z_ohm; unbounded impedance written as "unbounded".
inline void write_tdr_csv(std::ostream& os, const TdrTrace& trace, bool with_meta = true) {
    if (with_meta) {
        os << "# single-ended step TDR; rise_time_s=" << fmt9(trace.rise_time)
           << "; window=" << trace.window.describe() << "; z_ref_ohm=" << fmt9(trace.z_ref) << '\n';
    }
    os << "time_s,rho,z_ohm\n";
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        os << fmt9(trace.time[i]) << ',' << fmt9(trace.rho[i]) << ','
           << (trace.z[i] ? fmt9(*trace.z[i]) : std::string("unbounded")) << '\n';
    }
}

}  // namespace viacoax
