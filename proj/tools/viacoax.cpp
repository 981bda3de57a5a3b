// viacoax: command-line front end for stitched-via analysis and design.
//
// Exit codes: 0 success, 1 unexpected failure, 2 invalid input/config/usage,
// 3 output I/O failure, 4 infeasible design spec.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "viacoax/cascade.hpp"
#include "viacoax/config.hpp"
#include "viacoax/designer.hpp"
#include "viacoax/format.hpp"
#include "viacoax/tdr.hpp"
#include "viacoax/touchstone.hpp"

namespace fs = std::filesystem;
namespace ts = viacoax::touchstone;
using nlohmann::json;
using namespace viacoax;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kFailure = 1, kInvalid = 2, kIoFailure = 3, kInfeasible = 4 };

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutputFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string config_path;
    std::string spec_path;
    std::string input_path;
    std::string reference_path;
    std::string sweep_text = "0.01:110:11000";
    std::optional<double> z_ref;
    double threshold_db = -10.0;
    double rise_ps = 15.0;
    std::string window_text = "kaiser:6";
    std::string out_dir = ".";
    std::string format_text = "ri";
    bool no_meta = false;
    double inner_radius_mil = 0.0;
    std::vector<std::string> layer_names;
    std::vector<double> diameters_mil;
};

Sweep parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidInput("--sweep expects START:STOP:POINTS in GHz, got '" + text + "'");
    const auto start = parse_double(parts[0]), stop = parse_double(parts[1]), points = parse_double(parts[2]);
    if (!start || !stop || !points || *points != std::floor(*points))
        throw InvalidInput("--sweep expects START:STOP:POINTS in GHz, got '" + text + "'");
    Sweep s{*start * 1e9, *stop * 1e9, static_cast<int>(*points)};
    if (!(s.f_start >= 0.0) || !(s.f_stop > s.f_start) || s.n_points < 2)
        throw InvalidInput("--sweep requires 0 <= START < STOP and POINTS >= 2");
    return s;
}

Window parse_window(const std::string& text) {
    if (text == "none") return Window::none();
    if (text.rfind("kaiser:", 0) == 0) {
        const auto beta = parse_double(text.substr(7));
        if (beta && std::isfinite(*beta) && *beta >= 0.0) return Window::kaiser(*beta);
    }
    throw InvalidInput("--window expects kaiser:BETA or none, got '" + text + "'");
}

ts::Format parse_format(const std::string& text) {
    if (text == "ri") return ts::Format::RI;
    if (text == "ma") return ts::Format::MA;
    if (text == "db") return ts::Format::DB;
    throw InvalidInput("--format expects ma, db or ri, got '" + text + "'");
}

double z_ref_of(const RunConfig& rc) {
    const double z = rc.z_ref.value_or(50.0);
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidInput("--zref must be > 0");
    return z;
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputFailure("cannot create output directory '" + dir + "'");
    return fs::path(dir);
}

std::vector<fs::path> g_inputs;

void register_inputs(const RunConfig& rc) {
    for (const auto* p : {&rc.config_path, &rc.spec_path, &rc.input_path, &rc.reference_path}) {
        if (!p->empty()) g_inputs.push_back(fs::weakly_canonical(*p));
    }
}

void write_text(const fs::path& path, const std::string& text) {
    const auto target = fs::weakly_canonical(path);
    for (const auto& in : g_inputs) {
        if (in == target) throw InvalidInput("output '" + path.string() + "' would overwrite an input file");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputFailure("cannot write '" + path.string() + "'");
    out << text;
    out.close();
    if (!out) throw OutputFailure("failed writing '" + path.string() + "'");
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

ViaGeometry load_valid_geometry(const std::string& path) {
    if (path.empty()) throw InvalidInput("--config is required");
    ViaGeometry g = config::load_geometry(path);
    const auto diags = validate(g);
    for (const auto& d : diags) {
        std::cerr << (d.severity == Severity::Error ? "error: " : "warning: ") << d.field << ": " << d.message
                  << '\n';
    }
    if (has_errors(diags)) throw InvalidInput("geometry '" + path + "' failed validation");
    return g;
}

ts::TouchstoneDocument load_touchstone(const std::string& path) {
    try {
        return ts::read_file(path);
    } catch (const ts::IoError& e) {
        throw InvalidInput(e.what());
    } catch (const ts::ParseError& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

json meta_json(const std::string& command, json settings) {
    settings["tool"] = std::string("viacoax ") + kVersion;
    settings["command"] = command;
    return settings;
}

std::vector<std::string> meta_comments(const json& meta) {
    std::vector<std::string> out;
    for (auto it = meta.begin(); it != meta.end(); ++it)
        out.push_back(it.key() + "=" + (it->is_string() ? it->get<std::string>() : it->dump()));
    return out;
}

std::string ghz(double hz) { return fmt9(hz / 1e9); }

// ---------------------------------------------------------------- analyze

int cmd_analyze(const RunConfig& rc) {
    const ViaGeometry g = load_valid_geometry(rc.config_path);
    const Sweep sweep = parse_sweep(rc.sweep_text);
    const double z_ref = z_ref_of(rc);
    const auto fmt = parse_format(rc.format_text);
    const auto result = cascade_s_params(g, sweep, z_ref);
    const double bw = effective_bandwidth(result.response, rc.threshold_db);
    const auto freqs = sweep.frequencies();

    const json meta = meta_json("analyze",
                                {{"sweep_ghz", rc.sweep_text},
                                 {"z_ref_ohm", sig9(z_ref)},
                                 {"threshold_db", sig9(rc.threshold_db)},
                                 {"format", rc.format_text}});

    const fs::path out = prepare_out_dir(rc.out_dir);
    write_text(out / "sparams.s2p", ts::write(result.response, fmt, rc.no_meta ? std::vector<std::string>{}
                                                                              : meta_comments(meta)));
    json adv = config::advisory_to_json(result.advisory, freqs);
    adv["effective_bandwidth_hz"] = sig9(bw);
    adv["threshold_db"] = sig9(rc.threshold_db);
    adv["z_ref_ohm"] = sig9(z_ref);
    adv["diagnostics"] = config::diagnostics_to_json(validate(g));
    if (!rc.no_meta) adv["meta"] = meta;
    write_text(out / "advisory.json", dump_json(adv));

    std::cout << "layer  thickness_mil  outer_radius_mil  z0_ohm  te11_fc_approx_ghz  te11_fc_exact_ghz  "
                 "tm01_fc_exact_ghz\n";
    for (const auto& s : result.advisory.segments) {
        std::cout << s.name << "  " << fmt9(s.length.in_mils()) << "  " << fmt9(s.outer_radius.in_mils()) << "  "
                  << fmt9(s.z0) << "  " << ghz(s.te11_approx.fc) << "  " << ghz(s.te11.cutoff.fc) << "  "
                  << ghz(s.tm01.cutoff.fc) << '\n';
    }
    std::cout << "z_ref_ohm: " << fmt9(z_ref) << '\n';
    std::cout << "effective_bandwidth_ghz: " << ghz(bw) << " (S11 threshold " << fmt9(rc.threshold_db) << " dB)\n";
    std::cout << "note: higher-order modes are reported as cutoffs only; the TEM cascade does not include them\n";
    return kOk;
}

// ---------------------------------------------------------------- design

void print_report(const DesignReport& r) {
    std::cout << "barrel_radius_mil: " << fmt9(r.geometry.barrel_radius.in_mils()) << '\n';
    std::cout << "stitch_ring_radius_mil: " << fmt9(r.geometry.stitch_ring_radius.in_mils()) << '\n';
    std::cout << "layer  outer_radius_mil  z0_ohm  te11_fc_approx_ghz  te11_fc_exact_ghz  tm01_fc_exact_ghz\n";
    for (const auto& l : r.layers) {
        std::cout << l.name << "  " << fmt9(l.outer_radius.in_mils()) << "  " << fmt9(l.z0) << "  "
                  << ghz(l.te11_approx.fc) << "  " << ghz(l.te11_exact.fc) << "  " << ghz(l.tm01_exact.fc) << '\n';
    }
    std::cout << "z_ref_ohm: " << fmt9(r.z_ref) << '\n';
    std::cout << "effective_bandwidth_ghz: " << ghz(r.effective_bandwidth) << '\n';
    std::cout << "mode_margin: " << fmt9(r.mode_margin) << " (min exact TE11 fc " << ghz(r.min_te11_fc)
              << " GHz / f_max " << ghz(r.f_max) << " GHz)\n";
    std::cout << "verdict: " << (r.pass ? "pass" : "fail") << '\n';
    for (const auto& d : r.diagnostics)
        std::cout << (d.severity == Severity::Error ? "error: " : "warning: ") << d.field << ": " << d.message << '\n';
}

int cmd_design(const RunConfig& rc, const CLI::App& sub) {
    if (rc.spec_path.empty()) throw InvalidInput("--spec is required");
    auto input = config::design_from_json(config::read_json_file(rc.spec_path));
    std::optional<ViaGeometry> tmpl = input.geometry;
    if (!rc.config_path.empty()) tmpl = config::load_geometry(rc.config_path);
    if (!tmpl) throw InvalidInput("a geometry template is required (--config or \"geometry\" in the spec)");

    DesignSpec spec = input.spec;
    spec.sweep = parse_sweep(rc.sweep_text);
    spec.threshold_db = rc.threshold_db;
    if (sub.count("--zref")) spec.z_ref = z_ref_of(rc);

    const DesignReport rep = design_via(spec, *tmpl);
    json j = config::report_to_json(rep);
    if (!rc.no_meta) {
        j["meta"] = meta_json("design",
                              {{"sweep_ghz", rc.sweep_text}, {"threshold_db", sig9(rc.threshold_db)}});
    }
    const fs::path out = prepare_out_dir(rc.out_dir);
    write_text(out / "design_report.json", dump_json(j));
    print_report(rep);
    return has_errors(rep.diagnostics) ? kInvalid : kOk;
}

// ---------------------------------------------------------------- tdr

FrequencyResponse tdr_source(const RunConfig& rc, std::string& label) {
    if (!rc.input_path.empty() == !rc.config_path.empty())
        throw InvalidInput("tdr needs exactly one of --config or --input");
    if (!rc.input_path.empty()) {
        label = rc.input_path;
        return load_touchstone(rc.input_path).response;
    }
    label = rc.config_path;
    const ViaGeometry g = load_valid_geometry(rc.config_path);
    return cascade_s_params(g, parse_sweep(rc.sweep_text), z_ref_of(rc)).response;
}

TdrTrace run_tdr(const FrequencyResponse& r, const RunConfig& rc) {
    if (!(rc.rise_ps > 0.0)) throw InvalidInput("--rise-ps must be > 0");
    try {
        return s11_to_tdr(r, rc.rise_ps * 1e-12, parse_window(rc.window_text));
    } catch (const PreconditionError& e) {
        throw InvalidInput(std::string("cannot build TDR: ") + e.what());
    }
}

void print_trace_summary(const TdrTrace& t) {
    double zmin = INFINITY, zmax = -INFINITY;
    bool unbounded = false;
    for (std::size_t i = 0; i < t.z.size(); ++i) {
        if (t.time[i] < 0.0) continue;
        if (!t.z[i]) {
            unbounded = true;
            continue;
        }
        zmin = std::min(zmin, *t.z[i]);
        zmax = std::max(zmax, *t.z[i]);
    }
    std::cout << "rise_time_ps: " << fmt9(t.rise_time * 1e12) << '\n';
    std::cout << "window: " << t.window.describe() << '\n';
    std::cout << "z_ref_ohm: " << fmt9(t.z_ref) << '\n';
    std::cout << "z_min_ohm: " << fmt9(zmin) << '\n';
    std::cout << "z_max_ohm: " << fmt9(zmax) << '\n';
    std::cout << "z_final_ohm: " << (t.z.back() ? fmt9(*t.z.back()) : std::string("unbounded")) << '\n';
    if (unbounded) std::cout << "note: |rho| reaches 1; impedance reported as unbounded\n";
    std::cout << "note: single-ended TDR only\n";
}

int cmd_tdr(const RunConfig& rc) {
    std::string label;
    const auto response = tdr_source(rc, label);
    const auto trace = run_tdr(response, rc);
    const fs::path out = prepare_out_dir(rc.out_dir);
    std::ostringstream csv;
    write_tdr_csv(csv, trace, !rc.no_meta);
    write_text(out / "tdr.csv", csv.str());
    std::cout << "source: " << label << '\n';
    print_trace_summary(trace);
    return kOk;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const RunConfig& rc) {
    if (rc.reference_path.empty()) throw InvalidInput("--reference is required");
    const ViaGeometry g = load_valid_geometry(rc.config_path);
    const auto ref = load_touchstone(rc.reference_path).response;
    if (!is_uniform_grid(ref.frequencies)) throw InvalidInput("reference frequency grid must be uniform");

    // Model evaluated on the reference grid and impedance; no renormalization.
    const auto model = cascade_at(g, ref.frequencies, ref.z_ref).response;

    double dev_s11 = 0.0, dev_s21 = 0.0;
    std::ostringstream s_csv;
    if (!rc.no_meta) s_csv << "# model=" << rc.config_path << "; reference=" << rc.reference_path << '\n';
    s_csv << "frequency_hz,model_s11_db,reference_s11_db,model_s21_db,reference_s21_db\n";
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto& m = model.samples[i];
        const auto& r = ref.samples[i];
        dev_s11 = std::max(dev_s11, std::abs(m.s11 - r.s11));
        if (ref.ports == 2) dev_s21 = std::max(dev_s21, std::abs(m.s21 - r.s21));
        s_csv << fmt9(ref.frequencies[i]) << ',' << fmt9(to_db(m.s11)) << ',' << fmt9(to_db(r.s11)) << ','
              << fmt9(to_db(m.s21)) << ',' << (ref.ports == 2 ? fmt9(to_db(r.s21)) : std::string("")) << '\n';
    }

    const auto tm = run_tdr(model, rc);
    const auto tr = run_tdr(ref, rc);
    const auto cmp = compare_traces(tm, tr);
    std::ostringstream t_csv;
    if (!rc.no_meta) {
        t_csv << "# single-ended step TDR; rise_time_s=" << fmt9(tm.rise_time) << "; window=" << tm.window.describe()
              << '\n';
    }
    t_csv << "time_s,model_z_ohm,reference_z_ohm\n";
    for (std::size_t i = 0; i < tm.time.size(); ++i) {
        auto z = [](const std::optional<double>& v) { return v ? fmt9(*v) : std::string("unbounded"); };
        t_csv << fmt9(tm.time[i]) << ',' << z(tm.z[i]) << ',' << (i < tr.z.size() ? z(tr.z[i]) : std::string(""))
              << '\n';
    }

    json metrics = {{"max_abs_s11_deviation", sig9(dev_s11)},
                    {"max_abs_s21_deviation", sig9(dev_s21)},
                    {"tdr_max_dz_ohm", sig9(cmp.max_dz)},
                    {"tdr_delay_offset_s", sig9(cmp.delay_offset)},
                    {"tdr_lag_samples", cmp.lag_samples},
                    {"z_ref_ohm", sig9(ref.z_ref)}};
    if (!rc.no_meta) {
        metrics["meta"] = meta_json("compare",
                                    {{"rise_ps", sig9(rc.rise_ps)}, {"window", tm.window.describe()}});
    }

    const fs::path out = prepare_out_dir(rc.out_dir);
    write_text(out / "s_overlay.csv", s_csv.str());
    write_text(out / "tdr_overlay.csv", t_csv.str());
    write_text(out / "compare_metrics.json", dump_json(metrics));

    std::cout << "max_abs_s11_deviation: " << fmt9(dev_s11) << '\n';
    std::cout << "max_abs_s21_deviation: " << fmt9(dev_s21) << '\n';
    std::cout << "tdr_max_dz_ohm: " << fmt9(cmp.max_dz) << '\n';
    std::cout << "tdr_delay_offset_ps: " << fmt9(cmp.delay_offset * 1e12) << '\n';
    return kOk;
}

// ---------------------------------------------------------------- modulate / barrel-sweep

int cmd_modulate(const RunConfig& rc) {
    const ViaGeometry g = load_valid_geometry(rc.config_path);
    if (rc.layer_names.empty()) throw InvalidInput("--layers is required");
    const double z_ref = z_ref_of(rc);
    ModulationResult res = [&] {
        try {
            return modulate_inner_antipad(g, Length::mils(rc.inner_radius_mil), rc.layer_names, z_ref, 67e9,
                                          parse_sweep(rc.sweep_text), rc.threshold_db);
        } catch (const PreconditionError& e) {
            throw InvalidInput(e.what());
        }
    }();
    json shifts = json::array();
    std::cout << "layer  te11_fc_before_ghz  te11_fc_after_ghz  te11_approx_ratio  z0_before_ohm  z0_after_ohm  "
                 "added_mismatch\n";
    for (const auto& s : res.shifts) {
        std::cout << s.name << "  " << ghz(s.te11_fc_before) << "  " << ghz(s.te11_fc_after) << "  "
                  << fmt9(s.te11_approx_ratio) << "  " << fmt9(s.z0_before) << "  " << fmt9(s.z0_after) << "  "
                  << (s.added_mismatch ? "yes" : "no") << '\n';
        shifts.push_back({{"name", s.name},
                          {"te11_fc_before_hz", sig9(s.te11_fc_before)},
                          {"te11_fc_after_hz", sig9(s.te11_fc_after)},
                          {"te11_approx_ratio", sig9(s.te11_approx_ratio)},
                          {"tm01_fc_before_hz", sig9(s.tm01_fc_before)},
                          {"tm01_fc_after_hz", sig9(s.tm01_fc_after)},
                          {"z0_before_ohm", sig9(s.z0_before)},
                          {"z0_after_ohm", sig9(s.z0_after)},
                          {"added_mismatch", s.added_mismatch}});
    }
    std::cout << "effective_bandwidth_ghz: before " << ghz(res.before.effective_bandwidth) << ", after "
              << ghz(res.after.effective_bandwidth) << '\n';
    std::cout << "note: the TEM cascade shows the added mismatch; bandwidth gained by suppressing "
                 "higher-order modes needs a full-wave solver\n";

    json j = {{"geometry", config::geometry_to_json(res.geometry)},
              {"shifts", shifts},
              {"before", config::report_to_json(res.before)},
              {"after", config::report_to_json(res.after)}};
    const fs::path out = prepare_out_dir(rc.out_dir);
    write_text(out / "modulation.json", dump_json(j));
    write_text(out / "sparams_before.s2p", ts::write(res.before.response, parse_format(rc.format_text)));
    write_text(out / "sparams_after.s2p", ts::write(res.after.response, parse_format(rc.format_text)));
    return kOk;
}

int cmd_barrel_sweep(const RunConfig& rc) {
    const ViaGeometry g = load_valid_geometry(rc.config_path);
    if (rc.diameters_mil.empty()) throw InvalidInput("--diameters-mil is required");
    std::vector<Length> d;
    for (double x : rc.diameters_mil) d.push_back(Length::mils(x));
    const double z_ref = z_ref_of(rc);
    std::vector<BarrelSweepRow> rows;
    try {
        rows = barrel_sweep(g, d, z_ref, parse_sweep(rc.sweep_text), rc.threshold_db);
    } catch (const PreconditionError& e) {
        throw InvalidInput(e.what());
    }
    std::ostringstream csv;
    csv << "diameter_mil,z0_ohm,te11_fc_exact_hz,tdr_polarity,effective_bandwidth_hz\n";
    std::cout << "diameter_mil  z0_ohm  te11_fc_exact_ghz  tdr_polarity  effective_bandwidth_ghz\n";
    for (const auto& r : rows) {
        csv << fmt9(r.diameter.in_mils()) << ',' << fmt9(r.z0) << ',' << fmt9(r.te11_fc) << ','
            << to_string(r.polarity) << ',' << fmt9(r.effective_bandwidth) << '\n';
        std::cout << fmt9(r.diameter.in_mils()) << "  " << fmt9(r.z0) << "  " << ghz(r.te11_fc) << "  "
                  << to_string(r.polarity) << "  " << ghz(r.effective_bandwidth) << '\n';
    }
    const fs::path out = prepare_out_dir(rc.out_dir);
    write_text(out / "barrel_sweep.csv", csv.str());
    return kOk;
}

void add_common(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--sweep", rc.sweep_text, "Frequency sweep START:STOP:POINTS in GHz")->capture_default_str();
    sub->add_option("--zref", rc.z_ref, "Reference impedance in ohm (default 50)");
    sub->add_option("--threshold", rc.threshold_db, "S11 level defining effective bandwidth, dB")
        ->capture_default_str();
    sub->add_option("--out", rc.out_dir, "Output directory")->capture_default_str();
    sub->add_flag("--no-meta", rc.no_meta, "Omit settings metadata from data files");
}

void add_tdr_options(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--rise-ps", rc.rise_ps, "10-90% step rise time in ps")->capture_default_str();
    sub->add_option("--window", rc.window_text, "Spectral window: kaiser:BETA or none")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viacoax: coaxial-approximation design and analysis of stitched PCB via transitions"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    RunConfig rc;

    auto* analyze = app.add_subcommand("analyze", "S-parameters, mode advisory and bandwidth of a via stack");
    analyze->add_option("--config", rc.config_path, "Geometry JSON")->required();
    analyze->add_option("--format", rc.format_text, "Touchstone format: ma, db or ri")->capture_default_str();
    add_common(analyze, rc);

    auto* design = app.add_subcommand("design", "Solve via geometry for a target impedance and check headroom");
    design->add_option("--spec", rc.spec_path, "Design spec JSON")->required();
    design->add_option("--config", rc.config_path, "Geometry template JSON (overrides the spec's template)");
    add_common(design, rc);

    auto* tdr = app.add_subcommand("tdr", "Single-ended step TDR from a via model or a Touchstone file");
    tdr->add_option("--config", rc.config_path, "Geometry JSON");
    tdr->add_option("--input", rc.input_path, "Touchstone .s1p/.s2p file");
    add_common(tdr, rc);
    add_tdr_options(tdr, rc);

    auto* compare = app.add_subcommand("compare", "Compare a via model against reference S-parameters");
    compare->add_option("--config", rc.config_path, "Model geometry JSON")->required();
    compare->add_option("--reference", rc.reference_path, "Reference .s1p/.s2p file")->required();
    add_common(compare, rc);
    add_tdr_options(compare, rc);

    auto* modulate = app.add_subcommand("modulate", "Shrink inner-layer anti-pads and report the trade-off");
    modulate->add_option("--config", rc.config_path, "Geometry JSON")->required();
    modulate->add_option("--inner-radius-mil", rc.inner_radius_mil, "New anti-pad radius, mil")->required();
    modulate->add_option("--layers", rc.layer_names, "Layer names to modify")->required()->delimiter(',');
    modulate->add_option("--format", rc.format_text, "Touchstone format: ma, db or ri")->capture_default_str();
    add_common(modulate, rc);

    auto* sweep = app.add_subcommand("barrel-sweep", "Impedance, cutoff and TDR polarity versus barrel diameter");
    sweep->add_option("--config", rc.config_path, "Geometry JSON")->required();
    sweep->add_option("--diameters-mil", rc.diameters_mil, "Barrel diameters, mil")->required()->delimiter(',');
    add_common(sweep, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        register_inputs(rc);
        if (*analyze) return cmd_analyze(rc);
        if (*design) return cmd_design(rc, *design);
        if (*tdr) return cmd_tdr(rc);
        if (*compare) return cmd_compare(rc);
        if (*modulate) return cmd_modulate(rc);
        if (*sweep) return cmd_barrel_sweep(rc);
    } catch (const InfeasibleDesign& e) {
        std::cerr << "infeasible design: " << e.what() << '\n';
        return kInfeasible;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const config::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const OutputFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
