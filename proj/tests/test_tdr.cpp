#include <gtest/gtest.h>

#include <sstream>

#include "viacoax/tdr.hpp"
#include "viacoax/touchstone.hpp"

using namespace viacoax;

namespace {

constexpr double er = 3.62;
const Material lossless{er, 0.0};

FrequencyResponse constant_s11(cplx gamma, const Sweep& sweep = default_sweep(), double z_ref = 50.0) {
    FrequencyResponse r;
    r.ports = 1;
    r.z_ref = z_ref;
    r.frequencies = sweep.frequencies();
    r.samples.assign(r.frequencies.size(), SMatrix{gamma, {}, {}, {}});
    return r;
}

double one_way_delay(Length l) { return l.in_meters() * std::sqrt(er) / constants::c0; }

// Feed / middle / feed line sections, all sharing the barrel radius.
std::vector<CoaxSection> three_section(double z_feed, double z_mid, Length feed_len, Length mid_len) {
    const Length outer = Length::mils(30);
    return {CoaxSection::with_impedance(z_feed, outer, lossless, feed_len),
            CoaxSection::with_impedance(z_mid, outer, lossless, mid_len),
            CoaxSection::with_impedance(z_feed, outer, lossless, feed_len)};
}

FrequencyResponse delayed(const FrequencyResponse& r, double tau) {
    FrequencyResponse out = r;
    for (std::size_t i = 0; i < r.size(); ++i)
        out.samples[i].s11 *= std::polar(1.0, -2.0 * std::numbers::pi * r.frequencies[i] * tau);
    return out;
}

}  // namespace

TEST(Tdr, MatchedLineIsFlat) {
    const auto trace = s11_to_tdr(constant_s11(0.0));
    ASSERT_FALSE(trace.time.empty());
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        ASSERT_EQ(trace.rho[i], 0.0);
        ASSERT_TRUE(trace.z[i].has_value());
        ASSERT_NEAR(*trace.z[i], 50.0, 0.01);
    }
}

TEST(Tdr, ConstantReflectionSettlesAt75Ohm) {
    const auto trace = s11_to_tdr(constant_s11(0.2));
    const double dt = trace.dt();
    EXPECT_GT(dt, 0.0);
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        if (trace.time[i] < 5 * trace.rise_time) continue;
        ASSERT_NEAR(trace.rho[i], 0.2, 1e-3) << trace.time[i];
        ASSERT_NEAR(*trace.z[i], 75.0, 0.1);
    }
    EXPECT_NEAR(*trace.z.back(), 75.0, 0.1);
}

TEST(Tdr, SettledLevelIndependentOfKaiserBeta) {
    const auto base = s11_to_tdr(constant_s11(0.2), kDefaultRiseTime, Window::kaiser(6.0));
    for (double beta : {4.0, 6.0, 8.0}) {
        const auto t = s11_to_tdr(constant_s11(0.2), kDefaultRiseTime, Window::kaiser(beta));
        EXPECT_NEAR(*t.z.back() / *base.z.back(), 1.0, 0.005) << beta;
    }
    const auto plain = s11_to_tdr(constant_s11(0.2), kDefaultRiseTime, Window::none());
    EXPECT_NEAR(*plain.z.back(), 75.0, 0.1);
}

TEST(Tdr, CapacitiveDipAndInductivePeak) {
    const Length feed = Length::mils(80), mid = Length::mils(60);
    const double t_in = 2 * one_way_delay(feed);
    const double t_out = t_in + 2 * one_way_delay(mid);
    const auto freqs = default_sweep().frequencies();

    auto window_extreme = [&](double z_mid, bool want_min) {
        const auto sections = three_section(42.5, z_mid, feed, mid);
        const auto trace = s11_to_tdr(cascade_response(sections, freqs, 42.5));
        double extreme = want_min ? INFINITY : -INFINITY;
        for (std::size_t i = 0; i < trace.time.size(); ++i) {
            if (trace.time[i] < t_in || trace.time[i] > t_out) continue;
            extreme = want_min ? std::min(extreme, *trace.z[i]) : std::max(extreme, *trace.z[i]);
        }
        return extreme;
    };
    const double dip = window_extreme(36.0, true);
    const double peak = window_extreme(62.0, false);
    EXPECT_LT(dip, 42.5 - 3.0);
    EXPECT_GT(dip, 36.0 - 1.0);
    EXPECT_GT(peak, 42.5 + 10.0);
    EXPECT_LT(peak, 62.0 + 1.0);
}

TEST(Tdr, QuietBeforeFirstMismatch) {
    const Length feed = Length::mils(120), mid = Length::mils(40);
    const auto sections = three_section(50.0, 36.0, feed, mid);
    const auto trace = s11_to_tdr(cascade_response(sections, default_sweep().frequencies(), 50.0));
    const double arrival = 2 * one_way_delay(feed);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        if (trace.time[i] >= arrival - trace.rise_time) break;
        ASSERT_LT(std::fabs(trace.rho[i]), 0.01) << trace.time[i];
        ++checked;
    }
    EXPECT_GT(checked, 100u);
}

TEST(Tdr, DcExtrapolationMatchesExplicitDc) {
    const CoaxSection s(Length::mils(3.5), Length::mils(11), lossless, Length::mils(50));
    const std::vector<CoaxSection> secs{s};
    const auto with_dc = cascade_response(secs, Sweep{0.0, 50e9, 5001}.frequencies(), 50.0);
    const auto without = cascade_response(secs, Sweep{10e6, 50e9, 5000}.frequencies(), 50.0);
    const auto ta = s11_to_tdr(with_dc), tb = s11_to_tdr(without);
    ASSERT_EQ(ta.time.size(), tb.time.size());
    // The only difference is the DC bin: Re S11(10 MHz) stands in for S11(0) = 0.
    const double dc_error = std::fabs(without.samples[0].s11.real());
    EXPECT_LT(dc_error, 1e-6);
    for (std::size_t i = 0; i < ta.rho.size(); ++i) ASSERT_NEAR(ta.rho[i], tb.rho[i], 2 * dc_error + 1e-12);
}

TEST(Tdr, CoarseStartIsInterpolatedToDc) {
    FrequencyResponse r = constant_s11(0.2, Sweep{30e6, 20e9, 1998});
    const auto trace = s11_to_tdr(r);
    EXPECT_NEAR(*trace.z.back(), 75.0, 0.1);
}

TEST(Tdr, OffsetGridIsResampledToDcAlignedBins) {
    const Sweep offset{10e6, 110e9, 3000};
    EXPECT_NEAR(*s11_to_tdr(constant_s11(0.2, offset)).z.back(), 75.0, 0.1);

    const auto secs = three_section(50.0, 36.0, Length::mils(400), Length::mils(60));
    auto min_z = [](const TdrTrace& t) {
        double m = INFINITY;
        for (const auto& z : t.z) m = std::min(m, *z);
        return m;
    };
    const double aligned = min_z(s11_to_tdr(cascade_response(secs, default_sweep().frequencies(), 50.0)));
    const double resampled = min_z(s11_to_tdr(cascade_response(secs, offset.frequencies(), 50.0)));
    EXPECT_LT(aligned, 45.0);
    EXPECT_NEAR(resampled, aligned, 0.5);
}

TEST(Tdr, Errors) {
    EXPECT_THROW(s11_to_tdr(constant_s11(0.0), 0.0), PreconditionError);
    EXPECT_THROW(s11_to_tdr(constant_s11(0.0), -1e-12), PreconditionError);
    auto bent = constant_s11(0.0);
    bent.frequencies[10] += 3e6;
    EXPECT_THROW(s11_to_tdr(bent), PreconditionError);
    EXPECT_THROW(s11_to_tdr(FrequencyResponse{}), PreconditionError);
}

TEST(Tdr, UnboundedImpedanceMarker) {
    const auto trace = s11_to_tdr(constant_s11(1.0));
    EXPECT_FALSE(trace.z.back().has_value());
    for (std::size_t i = 0; i < trace.z.size(); ++i) {
        if (trace.z[i]) {
            ASSERT_LT(std::fabs(trace.rho[i]), 1.0);
        }
    }
    std::ostringstream os;
    write_tdr_csv(os, trace, false);
    EXPECT_NE(os.str().find("unbounded"), std::string::npos);
}

TEST(Tdr, ImpedanceMapIsMonotone) {
    EXPECT_EQ(*impedance_from_rho(0.0, 42.5), 42.5);
    double prev = -INFINITY;
    for (double rho = -0.999; rho < 0.999; rho += 0.001) {
        const double z = *impedance_from_rho(rho, 50.0);
        ASSERT_GT(z, prev);
        prev = z;
    }
    EXPECT_FALSE(impedance_from_rho(1.0, 50.0));
    EXPECT_FALSE(impedance_from_rho(-1.0, 50.0));
}

TEST(Tdr, BitDeterministic) {
    const auto sections = three_section(42.5, 36.0, Length::mils(30), Length::mils(30));
    const auto r = cascade_response(sections, default_sweep().frequencies(), 42.5);
    const auto a = s11_to_tdr(r), b = s11_to_tdr(r);
    ASSERT_EQ(a.rho, b.rho);
}

TEST(Tdr, CsvLayout) {
    const auto trace = s11_to_tdr(constant_s11(0.0, Sweep{0.0, 10e9, 11}));
    std::ostringstream with, without;
    write_tdr_csv(with, trace, true);
    write_tdr_csv(without, trace, false);
    EXPECT_EQ(with.str().rfind("# single-ended", 0), 0u);
    EXPECT_EQ(without.str().rfind("time_s,rho,z_ohm\n", 0), 0u);
}

TEST(CompareTraces, SelfComparison) {
    const auto sections = three_section(42.5, 36.0, Length::mils(30), Length::mils(30));
    const auto t = s11_to_tdr(cascade_response(sections, default_sweep().frequencies(), 42.5));
    const auto c = compare_traces(t, t);
    EXPECT_EQ(c.max_dz, 0.0);
    EXPECT_EQ(c.delay_offset, 0.0);
    EXPECT_GT(c.compared_points, 0u);
}

TEST(CompareTraces, RecoversConstructedDelay) {
    const auto sections = three_section(42.5, 62.0, Length::mils(30), Length::mils(40));
    const auto r = cascade_response(sections, default_sweep().frequencies(), 42.5);
    const auto a = s11_to_tdr(r);
    const auto b = s11_to_tdr(delayed(r, 10e-12));
    const auto c = compare_traces(a, b);
    EXPECT_NEAR(c.delay_offset, 10e-12, a.dt());
    EXPECT_LT(c.max_dz, 0.5);
    const auto back = compare_traces(b, a);
    EXPECT_NEAR(back.delay_offset, -10e-12, a.dt());
}

TEST(CompareTraces, TouchstoneRoundTripOfSameModel) {
    const auto sections = three_section(42.5, 36.0, Length::mils(40), Length::mils(50));
    const auto r = cascade_response(sections, default_sweep().frequencies(), 42.5);
    const auto doc = touchstone::parse(touchstone::write(r, touchstone::Format::RI), 2);
    const auto c = compare_traces(s11_to_tdr(r), s11_to_tdr(doc.response));
    EXPECT_LT(c.max_dz, 0.5);
    EXPECT_EQ(c.lag_samples, 0);
}

TEST(CompareTraces, Preconditions) {
    const auto a = s11_to_tdr(constant_s11(0.1));
    const auto b = s11_to_tdr(constant_s11(0.1), 30e-12);
    EXPECT_THROW(compare_traces(a, b), PreconditionError);
    auto shifted = a;
    for (auto& t : shifted.time) t += 1.0;
    EXPECT_THROW(compare_traces(a, shifted), PreconditionError);
}
