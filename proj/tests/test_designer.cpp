#include <gtest/gtest.h>

#include <random>

#include "viacoax/designer.hpp"

using namespace viacoax;

namespace {

constexpr double er = 3.62;

ViaGeometry reference_template(double a_mil = 3.5, double b_mil = 15.0) {
    ViaGeometry g;
    g.barrel_radius = Length::mils(a_mil);
    g.stitch_ring_radius = Length::mils(b_mil);
    g.stitch_count = 7;
    g.material = {er, 0.0};
    const char* names[] = {"L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9", "L10"};
    for (const char* n : names) g.layers.push_back({n, Length::mils(6.0), Length::mils(b_mil)});
    return g;
}

const std::vector<std::string> kInner = {"L3", "L4", "L5", "L6", "L7", "L8"};

bool has_note(const DesignReport& r, const std::string& field) {
    for (const auto& d : r.diagnostics)
        if (d.field == field) return true;
    return false;
}

}  // namespace

TEST(DesignVia, SolvedOuterReproducesTemplate) {
    DesignSpec spec;
    spec.free_outer = true;
    spec.target_z0 = coax_impedance(Length::mils(3.5), Length::mils(15), er);
    spec.f_max = 67e9;
    const auto rep = design_via(spec, reference_template());
    EXPECT_NEAR(rep.geometry.stitch_ring_radius.in_mils(), 15.0, 1e-6);
    for (const auto& l : rep.geometry.layers) EXPECT_NEAR(l.antipad_radius.in_mils(), 15.0, 1e-6);
}

TEST(DesignVia, FiftyOhmOuterRadius) {
    DesignSpec spec;
    spec.free_outer = true;
    spec.target_z0 = 50.0;
    spec.barrel_radius = Length::mils(3.5);
    const auto rep = design_via(spec, reference_template());
    EXPECT_NEAR(rep.geometry.stitch_ring_radius.in_mils(), 17.1, 0.05);
    EXPECT_NEAR(rep.layers[0].z0, 50.0, 1e-6 * 50.0);
    EXPECT_TRUE(rep.pass);
    EXPECT_DOUBLE_EQ(rep.effective_bandwidth, 110e9);  // matched to z_ref = target
}

TEST(DesignVia, BarrelForFortyTwoAndHalfOhm) {
    DesignSpec spec;
    spec.free_barrel = true;
    spec.target_z0 = 42.5;
    spec.outer_radius = Length::mils(15);
    spec.f_max = 67e9;
    const auto rep = design_via(spec, reference_template());
    EXPECT_NEAR(rep.geometry.barrel_radius.in_mils(), 3.89, 0.02);
    EXPECT_NEAR(rep.layers[0].te11_approx.fc / 1e9, 104.6, 1.0);
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.mode_margin, 1.5);
    EXPECT_EQ(rep.layers[0].te11_exact.method, CutoffMethod::ExactBesselRoot);
    EXPECT_DOUBLE_EQ(rep.mode_margin, rep.min_te11_fc / 67e9);
}

TEST(DesignVia, InfeasibleBarrelFloor) {
    DesignSpec spec;
    spec.free_barrel = true;
    spec.target_z0 = 120.0;
    spec.outer_radius = Length::mils(15);
    spec.max_outer_radius = Length::mils(15);
    spec.min_barrel_radius = Length::mils(2);
    // Highest reachable: a at the floor -> 63.5 ohm.
    EXPECT_NEAR(coax_impedance(Length::mils(2), Length::mils(15), er), 63.5, 0.1);
    try {
        design_via(spec, reference_template());
        FAIL();
    } catch (const InfeasibleDesign& e) {
        EXPECT_EQ(e.constraint(), "min_barrel_radius");
        EXPECT_NE(std::string(e.what()).find("63.49"), std::string::npos);
    }
}

TEST(DesignVia, InfeasibleOuterCap) {
    DesignSpec spec;
    spec.free_outer = true;
    spec.target_z0 = 50.0;
    spec.max_outer_radius = Length::mils(15);
    try {
        design_via(spec, reference_template());
        FAIL();
    } catch (const InfeasibleDesign& e) {
        EXPECT_EQ(e.constraint(), "max_outer_radius");
    }
}

TEST(DesignVia, BothFreeClampsToCapAndResolvesBarrel) {
    DesignSpec spec;
    spec.free_outer = spec.free_barrel = true;
    spec.target_z0 = 50.0;
    spec.max_outer_radius = Length::mils(15);
    spec.min_barrel_radius = Length::mils(2);
    const auto rep = design_via(spec, reference_template());
    EXPECT_NEAR(rep.geometry.stitch_ring_radius.in_mils(), 15.0, 1e-9);
    EXPECT_NEAR(coax_impedance(rep.geometry.barrel_radius, rep.geometry.stitch_ring_radius, er), 50.0, 1e-6 * 50);
    EXPECT_TRUE(has_note(rep, "outer_radius"));
}

TEST(DesignVia, AntipadFloorClampMissesTarget) {
    DesignSpec spec;
    spec.free_outer = true;
    spec.target_z0 = 20.0;
    spec.min_antipad_radius = Length::mils(8);
    const auto rep = design_via(spec, reference_template());
    EXPECT_NEAR(rep.geometry.stitch_ring_radius.in_mils(), 8.0, 1e-9);
    EXPECT_TRUE(has_note(rep, "outer_radius"));
    EXPECT_TRUE(has_note(rep, "target_z0"));
    EXPECT_FALSE(has_errors(rep.diagnostics));
}

TEST(DesignVia, NoFreeParameter) {
    DesignSpec spec;
    EXPECT_THROW(design_via(spec, reference_template()), PreconditionError);
}

TEST(DesignVia, TemplateWarningsCarryThrough) {
    auto t = reference_template();
    t.stitch_count = 4;
    DesignSpec spec;
    spec.free_outer = true;
    const auto rep = design_via(spec, t);
    EXPECT_TRUE(has_note(rep, "stitch_count"));
}

TEST(DesignVia, InverseProperty) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> z(30.0, 70.0), am(2.0, 5.0);
    for (int i = 0; i < 20; ++i) {
        DesignSpec spec;
        spec.target_z0 = z(rng);
        spec.sweep = Sweep{1e9, 110e9, 110};
        if (i % 2) {
            spec.free_outer = true;
            spec.barrel_radius = Length::mils(am(rng));
        } else {
            spec.free_barrel = true;
            spec.outer_radius = Length::mils(15);
        }
        const auto rep = design_via(spec, reference_template());
        const double achieved = coax_impedance(rep.geometry.barrel_radius, rep.geometry.stitch_ring_radius, er);
        ASSERT_NEAR(achieved, spec.target_z0, 1e-6 * spec.target_z0);
    }
}

TEST(DesignVia, VerdictConsistency) {
    for (double f_max : {30e9, 67e9, 100e9, 115e9}) {
        for (double z_ref : {45.86, 20.0, 150.0}) {
            const auto rep = evaluate_design(reference_template(), f_max, z_ref);
            EXPECT_EQ(rep.pass, rep.min_te11_fc > f_max && rep.effective_bandwidth >= f_max)
                << f_max << " " << z_ref;
            EXPECT_EQ(rep.pass, rep.mode_margin > 1.0 && rep.effective_bandwidth >= f_max);
        }
    }
    EXPECT_FALSE(evaluate_design(reference_template(), 115e9, 45.86).pass);  // above TE11 cutoff
    EXPECT_FALSE(evaluate_design(reference_template(), 67e9, 5.0).pass);     // heavy mismatch
}

TEST(ModulateAntipad, ElevenMilInnerLayers) {
    const auto res = modulate_inner_antipad(reference_template(), Length::mils(11), kInner, 50.0);
    ASSERT_EQ(res.shifts.size(), kInner.size());
    for (const auto& s : res.shifts) {
        EXPECT_NEAR(s.te11_approx_ratio, 18.5 / 14.5, 1e-12);
        EXPECT_NEAR(s.te11_approx_ratio, 1.276, 0.005);
        EXPECT_NEAR(s.z0_before, 45.9, 0.05);
        EXPECT_NEAR(s.z0_after, 36.1, 0.1);
        EXPECT_TRUE(s.added_mismatch);
        EXPECT_GT(s.te11_fc_after, s.te11_fc_before);
        EXPECT_GT(s.tm01_fc_after, s.tm01_fc_before);
    }
    EXPECT_EQ(res.geometry.layers[0].antipad_radius, Length::mils(15));
    EXPECT_EQ(res.geometry.layers[3].antipad_radius, Length::mils(11));
    EXPECT_EQ(res.before.response.size(), res.after.response.size());
}

TEST(ModulateAntipad, NoOpWhenRadiusUnchanged) {
    const auto g = reference_template();
    const auto res = modulate_inner_antipad(g, Length::mils(15), kInner, 50.0);
    for (std::size_t i = 0; i < g.layers.size(); ++i)
        EXPECT_EQ(res.geometry.layers[i].antipad_radius, g.layers[i].antipad_radius);
    EXPECT_EQ(res.before.effective_bandwidth, res.after.effective_bandwidth);
    EXPECT_EQ(res.before.min_te11_fc, res.after.min_te11_fc);
    for (std::size_t i = 0; i < res.before.response.size(); ++i)
        ASSERT_EQ(res.before.response.samples[i].s11, res.after.response.samples[i].s11);
    for (const auto& s : res.shifts) EXPECT_EQ(s.te11_fc_before, s.te11_fc_after);
}

TEST(ModulateAntipad, Errors) {
    EXPECT_THROW(modulate_inner_antipad(reference_template(), Length::mils(3.5), kInner), PreconditionError);
    EXPECT_THROW(modulate_inner_antipad(reference_template(), Length::mils(2), kInner), PreconditionError);
    EXPECT_THROW(modulate_inner_antipad(reference_template(), Length::mils(11), {"L99"}), PreconditionError);
}

TEST(ModulateAntipad, RandomReductionsRaiseExactCutoffs) {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> r(4.5, 14.5);
    for (int i = 0; i < 10; ++i) {
        const auto res = modulate_inner_antipad(reference_template(), Length::mils(r(rng)), {"L4", "L5"}, 50.0, 67e9,
                                                Sweep{1e9, 110e9, 110});
        ASSERT_EQ(res.shifts.size(), 2u);
        for (const auto& s : res.shifts) {
            ASSERT_GT(s.te11_fc_after, s.te11_fc_before);
            ASSERT_GT(s.tm01_fc_after, s.tm01_fc_before);
        }
    }
}

TEST(BarrelSweep, FourSevenTenMil) {
    const double z_ref = 45.86;
    const auto rows = barrel_sweep(reference_template(), {Length::mils(4), Length::mils(7), Length::mils(10)}, z_ref);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].z0, 63.5, 0.1);
    EXPECT_NEAR(rows[1].z0, 45.9, 0.1);
    EXPECT_NEAR(rows[2].z0, 34.6, 0.1);
    EXPECT_EQ(rows[0].polarity, TdrPolarity::Peak);
    EXPECT_EQ(rows[1].polarity, TdrPolarity::Flat);
    EXPECT_EQ(rows[2].polarity, TdrPolarity::Dip);
    const double reported[] = {62.0, 42.5, 36.0};
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(rows[i].z0, reported[i], 4.0);
    EXPECT_GT(rows[0].te11_fc, rows[1].te11_fc);
    EXPECT_GT(rows[1].te11_fc, rows[2].te11_fc);
    EXPECT_EQ(rows[1].effective_bandwidth, 110e9);
}

TEST(BarrelSweep, MonotoneColumns) {
    std::vector<Length> d;
    for (double x = 2.0; x <= 20.0; x += 1.0) d.push_back(Length::mils(x));
    const auto rows = barrel_sweep(reference_template(), d, 50.0, Sweep{1e9, 110e9, 110});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].z0, rows[i - 1].z0);
        EXPECT_LT(rows[i].te11_fc, rows[i - 1].te11_fc);
    }
}

TEST(BarrelSweep, DiameterOutOfRange) {
    EXPECT_THROW(barrel_sweep(reference_template(), {Length::mils(30)}, 50.0), PreconditionError);
    EXPECT_THROW(barrel_sweep(reference_template(), {Length::mils(0)}, 50.0), PreconditionError);
}

TEST(Polarity, Thresholds) {
    EXPECT_EQ(classify_polarity(49.6, 50.0), TdrPolarity::Flat);
    EXPECT_EQ(classify_polarity(49.4, 50.0), TdrPolarity::Dip);
    EXPECT_EQ(classify_polarity(50.6, 50.0), TdrPolarity::Peak);
}
