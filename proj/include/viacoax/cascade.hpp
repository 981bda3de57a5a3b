#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viacoax/coax.hpp"
#include "viacoax/geometry.hpp"
#include "viacoax/modes.hpp"

namespace viacoax {

using cplx = std::complex<double>;

/// ABCD two-port matrix.
struct TransferMatrix {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    cplx c{0.0, 0.0};
    cplx d{1.0, 0.0};

    cplx determinant() const { return a * d - b * c; }

    friend TransferMatrix operator*(const TransferMatrix& x, const TransferMatrix& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
    }
};

/// S-matrix entries for one frequency. One-port responses only use s11.
struct SMatrix {
    cplx s11, s21, s12, s22;
};

/// Uniform linear frequency sweep.
struct Sweep {
    double f_start = 0.01e9;
    double f_stop = 110e9;
    int n_points = 11000;

    double step() const { return (f_stop - f_start) / (n_points - 1); }

    std::vector<double> frequencies() const {
        require(std::isfinite(f_start) && f_start >= 0.0, "sweep requires f_start >= 0");
        require(std::isfinite(f_stop) && f_stop > f_start, "sweep requires f_stop > f_start");
        require(n_points >= 2, "sweep requires n_points >= 2");
        std::vector<double> f(static_cast<std::size_t>(n_points));
        const double df = step();
        for (int i = 0; i < n_points; ++i) f[i] = f_start + i * df;
        f.back() = f_stop;
        return f;
    }
};

inline Sweep default_sweep() { return {}; }

struct FrequencyResponse {
    std::vector<double> frequencies;  // Hz, ascending
    int ports = 2;
    std::vector<SMatrix> samples;
    double z_ref = 50.0;

    std::size_t size() const { return frequencies.size(); }
};

/// True when every point sits on the ideal uniform grid, to `rel_tol` of the
/// top frequency (or a millionth of a step, whichever is looser). The default
/// admits grids read back from files written with 9 significant digits.
inline bool is_uniform_grid(std::span<const double> f, double rel_tol = 1e-8) {
    if (f.size() < 2) return false;
    const double df = (f.back() - f.front()) / static_cast<double>(f.size() - 1);
    if (!(df > 0.0)) return false;
    const double tol = std::max(rel_tol * std::fabs(f.back()), 1e-6 * df);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::fabs(f[i] - (f.front() + static_cast<double>(i) * df)) > tol) return false;
    }
    return true;
}

/// Transfer matrix of a TEM coax segment at frequency f. Dielectric loss enters
/// as alpha_d = beta tan(delta) / 2.
inline TransferMatrix segment_matrix(const CoaxSection& section, double f) {
    require(std::isfinite(f) && f >= 0.0, "segment_matrix requires f >= 0");
    const double z0 = section.z0();
    const double beta_l = wavenumber(f, section.material().epsilon_r) * section.length().in_meters();
    const double tan_d = section.material().loss_tangent;
    if (tan_d == 0.0) {
        const double cs = std::cos(beta_l), sn = std::sin(beta_l);
        return {cplx(cs, 0.0), cplx(0.0, z0 * sn), cplx(0.0, sn / z0), cplx(cs, 0.0)};
    }
    const cplx gamma_l(0.5 * beta_l * tan_d, beta_l);
    const cplx ch = std::cosh(gamma_l), sh = std::sinh(gamma_l);
    return {ch, z0 * sh, sh / z0, ch};
}

inline TransferMatrix cascade_matrix(std::span<const CoaxSection> sections, double f) {
    TransferMatrix m;
    for (const auto& s : sections) m = m * segment_matrix(s, f);
    return m;
}

/// ABCD to S with equal real reference impedance at both ports.
inline SMatrix to_s_params(const TransferMatrix& m, double z_ref) {
    const double zr = z_ref;
    const cplx den = m.a * zr + m.b + m.c * zr * zr + m.d * zr;
    return {(m.a * zr + m.b - m.c * zr * zr - m.d * zr) / den, 2.0 * zr / den,
            2.0 * zr * m.determinant() / den, (-m.a * zr + m.b - m.c * zr * zr + m.d * zr) / den};
}

inline FrequencyResponse cascade_response(std::span<const CoaxSection> sections,
                                          std::span<const double> frequencies, double z_ref) {
    require(std::isfinite(z_ref) && z_ref > 0.0, "z_ref must be > 0");
    FrequencyResponse r;
    r.frequencies.assign(frequencies.begin(), frequencies.end());
    r.ports = 2;
    r.z_ref = z_ref;
    r.samples.reserve(frequencies.size());
    for (double f : frequencies) r.samples.push_back(to_s_params(cascade_matrix(sections, f), z_ref));
    return r;
}

/// A layer of the stack turned into a coax segment.
struct StackSegment {
    std::string name;
    CoaxSection section;
};

/// One segment per layer, top to bottom; outer radius = anti-pad clamped to the ring.
inline std::vector<StackSegment> stack_segments(const ViaGeometry& g) {
    require_valid(g);
    std::vector<StackSegment> out;
    out.reserve(g.layers.size());
    for (const auto& layer : g.layers) {
        out.push_back({layer.name, CoaxSection(g.barrel_radius, g.outer_radius(layer), g.material,
                                               layer.thickness)});
    }
    return out;
}

/// Per-segment higher-order-mode bookkeeping. The TEM cascade does not carry
/// these modes; they are reported alongside it.
struct ModeTrack {
    ModeCutoff cutoff;           // exact
    std::vector<double> alpha;   // Np/m per sweep frequency
    std::vector<double> attenuation_db;  // alpha * length * 20/ln(10)
};

struct SegmentAdvisory {
    std::string name;
    Length length;
    Length outer_radius;
    double z0 = 0.0;
    ModeCutoff te11_approx;
    ModeTrack te11;
    ModeTrack tm01;
};

struct ModeAdvisory {
    std::vector<SegmentAdvisory> segments;
};

inline ModeTrack track_mode(const CoaxSection& s, std::span<const double> freqs,
                            const ModeCutoff& cutoff) {
    ModeTrack t{cutoff, {}, {}};
    t.alpha.reserve(freqs.size());
    t.attenuation_db.reserve(freqs.size());
    const double er = s.material().epsilon_r;
    for (double f : freqs) {
        const double alpha = evanescent_alpha(cutoff.kc, f, er);
        t.alpha.push_back(alpha);
        t.attenuation_db.push_back(alpha * s.length().in_meters() * constants::neper_to_db);
    }
    return t;
}

inline ModeAdvisory mode_advisory(std::span<const StackSegment> segments,
                                  std::span<const double> freqs) {
    ModeAdvisory adv;
    // Root finding depends only on (a, b); stacks usually repeat a few radii.
    std::map<std::pair<double, double>, std::pair<ModeCutoff, ModeCutoff>> cache;
    for (const auto& seg : segments) {
        const CoaxSection& s = seg.section;
        const double er = s.material().epsilon_r;
        const auto key = std::make_pair(s.inner_radius().in_meters(), s.outer_radius().in_meters());
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache
                     .emplace(key, std::make_pair(
                                       exact_cutoff(Mode::te11(), s.inner_radius(), s.outer_radius(), er),
                                       exact_cutoff(Mode::tm0n(1), s.inner_radius(), s.outer_radius(), er)))
                     .first;
        }
        SegmentAdvisory sa;
        sa.name = seg.name;
        sa.length = s.length();
        sa.outer_radius = s.outer_radius();
        sa.z0 = s.z0();
        sa.te11_approx = approximate_cutoff(s.inner_radius(), s.outer_radius(), er);
        sa.te11 = track_mode(s, freqs, it->second.first);
        sa.tm01 = track_mode(s, freqs, it->second.second);
        adv.segments.push_back(std::move(sa));
    }
    return adv;
}

struct CascadeOptions {
    /// Optional leading coax launch (connector feed) ahead of the first layer.
    std::optional<CoaxSection> feed;
};

struct CascadeResult {
    FrequencyResponse response;
    ModeAdvisory advisory;
};

inline CascadeResult cascade_at(const ViaGeometry& g, std::span<const double> freqs, double z_ref,
                                const CascadeOptions& options = {}) {
    const auto segments = stack_segments(g);
    std::vector<CoaxSection> sections;
    if (options.feed) sections.push_back(*options.feed);
    for (const auto& s : segments) sections.push_back(s.section);
    return {cascade_response(sections, freqs, z_ref), mode_advisory(segments, freqs)};
}

/// Two-port response of the whole via stack over a uniform sweep.
inline CascadeResult cascade_s_params(const ViaGeometry& g, const Sweep& sweep, double z_ref,
                                      const CascadeOptions& options = {}) {
    const auto freqs = sweep.frequencies();
    return cascade_at(g, freqs, z_ref, options);
}

inline double to_db(cplx s) { return 20.0 * std::log10(std::abs(s)); }

/// Lowest frequency where |S11| first reaches `threshold_db`, linearly
/// interpolated in dB; the last grid frequency when it never does.
inline double effective_bandwidth(const FrequencyResponse& r, double threshold_db = -10.0) {
    require(!r.frequencies.empty() && r.samples.size() == r.frequencies.size(),
            "effective_bandwidth requires a non-empty response");
    double prev_db = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double db = to_db(r.samples[i].s11);
        if (db >= threshold_db) {
            if (i == 0 || !std::isfinite(prev_db)) return r.frequencies[i];
            const double t = (threshold_db - prev_db) / (db - prev_db);
            return r.frequencies[i - 1] + t * (r.frequencies[i] - r.frequencies[i - 1]);
        }
        prev_db = db;
    }
    return r.frequencies.back();
}

}  // namespace viacoax
