#pragma once

// Touchstone v1 (.s1p / .s2p) reader and writer. S-parameters only.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viacoax/cascade.hpp"
#include "viacoax/format.hpp"

namespace viacoax::touchstone {

enum class FrequencyUnit { Hz, kHz, MHz, GHz };
enum class Format { MA, DB, RI };

inline double unit_scale(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return 1.0;
        case FrequencyUnit::kHz: return 1e3;
        case FrequencyUnit::MHz: return 1e6;
        case FrequencyUnit::GHz: return 1e9;
    }
    return 1.0;
}

inline const char* to_string(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return "Hz";
        case FrequencyUnit::kHz: return "kHz";
        case FrequencyUnit::MHz: return "MHz";
        case FrequencyUnit::GHz: return "GHz";
    }
    return "Hz";
}

inline const char* to_string(Format f) {
    switch (f) {
        case Format::MA: return "MA";
        case Format::DB: return "DB";
        case Format::RI: return "RI";
    }
    return "RI";
}

/// Structured parse failure. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct OptionLine {
    FrequencyUnit unit = FrequencyUnit::GHz;
    Format format = Format::MA;
    double z_ref = 50.0;
};

struct TouchstoneDocument {
    OptionLine options;
    int ports = 2;
    std::vector<std::string> comments;
    FrequencyResponse response;  // frequencies in Hz
};

inline std::complex<double> decode_pair(Format fmt, double x, double y) {
    constexpr double deg = std::numbers::pi / 180.0;
    switch (fmt) {
        case Format::RI: return {x, y};
        case Format::MA: return std::polar(x, y * deg);
        case Format::DB: return std::polar(std::pow(10.0, x / 20.0), y * deg);
    }
    return {x, y};
}

// Floor for DB output so an exact zero stays a finite, parseable number.
inline constexpr double kDbFloor = -600.0;

inline std::pair<double, double> encode_pair(Format fmt, std::complex<double> s) {
    constexpr double rad = 180.0 / std::numbers::pi;
    switch (fmt) {
        case Format::RI: return {s.real(), s.imag()};
        case Format::MA: return {std::abs(s), std::arg(s) * rad};
        case Format::DB: {
            const double mag = std::abs(s);
            const double db = mag > 0.0 ? std::max(kDbFloor, 20.0 * std::log10(mag)) : kDbFloor;
            return {db, std::arg(s) * rad};
        }
    }
    return {s.real(), s.imag()};
}

namespace detail {

inline std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t j = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > j) out.push_back(s.substr(j, i - j));
    }
    return out;
}

inline OptionLine parse_option_line(std::string_view body, std::size_t line_no) {
    OptionLine opt;
    const auto tokens = split_ws(body);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string t = upper(tokens[i]);
        if (t == "HZ") opt.unit = FrequencyUnit::Hz;
        else if (t == "KHZ") opt.unit = FrequencyUnit::kHz;
        else if (t == "MHZ") opt.unit = FrequencyUnit::MHz;
        else if (t == "GHZ") opt.unit = FrequencyUnit::GHz;
        else if (t == "S") {}
        else if (t == "Y" || t == "Z" || t == "G" || t == "H")
            throw ParseError(line_no, "unsupported parameter type '" + std::string(tokens[i]) + "' (only S)");
        else if (t == "MA") opt.format = Format::MA;
        else if (t == "DB") opt.format = Format::DB;
        else if (t == "RI") opt.format = Format::RI;
        else if (t == "R") {
            if (i + 1 >= tokens.size()) throw ParseError(line_no, "option 'R' missing impedance value");
            const auto z = parse_double(tokens[++i]);
            if (!z || !std::isfinite(*z) || *z <= 0.0)
                throw ParseError(line_no, "invalid reference impedance '" + std::string(tokens[i]) + "'");
            opt.z_ref = *z;
        } else {
            throw ParseError(line_no, "unknown option token '" + std::string(tokens[i]) + "'");
        }
    }
    return opt;
}

}  // namespace detail

/// Parses Touchstone v1 text for a 1- or 2-port network. Missing option line
/// defaults to "# GHz S MA R 50". Two-port data order is S11 S21 S12 S22.
inline TouchstoneDocument parse(std::string_view text, int ports) {
    if (ports != 1 && ports != 2) throw ParseError(0, "only 1- and 2-port files are supported");
    TouchstoneDocument doc;
    doc.ports = ports;
    const std::size_t arity = 1 + 2 * static_cast<std::size_t>(ports * ports);
    bool have_options = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto bang = line.find('!'); bang != std::string_view::npos) {
            doc.comments.emplace_back(line.substr(bang + 1));
            line = line.substr(0, bang);
        }
        const auto tokens = detail::split_ws(line);
        if (tokens.empty()) continue;

        if (tokens.front().front() == '[') {
            throw ParseError(line_no, "Touchstone v2 keyword '" + std::string(tokens.front()) +
                                          "' not supported (v1 files only)");
        }
        if (tokens.front().front() == '#') {
            if (!doc.response.frequencies.empty()) throw ParseError(line_no, "option line after data rows");
            if (!have_options) {
                const auto hash = line.find('#');
                doc.options = detail::parse_option_line(line.substr(hash + 1), line_no);
                have_options = true;
            }
            continue;
        }
        if (tokens.size() != arity) {
            throw ParseError(line_no, "expected " + std::to_string(arity) + " values per row, found " +
                                          std::to_string(tokens.size()));
        }
        std::vector<double> v(arity);
        for (std::size_t i = 0; i < arity; ++i) {
            const auto d = parse_double(tokens[i]);
            if (!d || !std::isfinite(*d))
                throw ParseError(line_no, "invalid number '" + std::string(tokens[i]) + "'");
            v[i] = *d;
        }
        const double f = v[0] * unit_scale(doc.options.unit);
        if (!std::isfinite(f) || f < 0.0) throw ParseError(line_no, "frequency must be finite and >= 0");
        if (!doc.response.frequencies.empty() && !(f > doc.response.frequencies.back()))
            throw ParseError(line_no, "frequencies must be strictly ascending");

        SMatrix s{};
        const Format fmt = doc.options.format;
        s.s11 = decode_pair(fmt, v[1], v[2]);
        if (ports == 2) {
            s.s21 = decode_pair(fmt, v[3], v[4]);
            s.s12 = decode_pair(fmt, v[5], v[6]);
            s.s22 = decode_pair(fmt, v[7], v[8]);
        }
        doc.response.frequencies.push_back(f);
        doc.response.samples.push_back(s);
    }
    if (doc.response.frequencies.empty()) throw ParseError(0, "no data rows");
    doc.response.ports = ports;
    doc.response.z_ref = doc.options.z_ref;
    return doc;
}

/// Port count from the file extension (.s1p -> 1, .s2p -> 2).
inline int ports_from_path(const std::filesystem::path& path) {
    const std::string ext = detail::upper(path.extension().string());
    if (ext == ".S1P") return 1;
    if (ext == ".S2P") return 2;
    throw ParseError(0, "unsupported Touchstone extension '" + path.extension().string() + "'");
}

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline TouchstoneDocument read_file(const std::filesystem::path& path) {
    const int ports = ports_from_path(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), ports);
}

/// Serializes with frequencies in GHz and 9 significant digits. Each entry of
/// `comments` becomes one '!' line ahead of the option line.
inline std::string write(const FrequencyResponse& r, Format format,
                         const std::vector<std::string>& comments = {}) {
    if (r.ports != 1 && r.ports != 2) throw PreconditionError("Touchstone writer supports 1 or 2 ports");
    require(r.samples.size() == r.frequencies.size() && !r.frequencies.empty(),
            "Touchstone writer requires a non-empty response");
    std::string out;
    for (const auto& c : comments) out += "! " + c + "\n";
    out += std::string("# GHz S ") + to_string(format) + " R " + fmt9(r.z_ref) + "\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        out += fmt9(r.frequencies[i] / 1e9);
        auto put = [&](std::complex<double> s) {
            const auto [x, y] = encode_pair(format, s);
            out += ' ';
            out += fmt9(x);
            out += ' ';
            out += fmt9(y);
        };
        const SMatrix& s = r.samples[i];
        put(s.s11);
        if (r.ports == 2) {
            put(s.s21);
            put(s.s12);
            put(s.s22);
        }
        out += '\n';
    }
    return out;
}

}  // namespace viacoax::touchstone
