#pragma once

#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fhkh/errors.hpp"
#include "fhkh/potentials.hpp"
#include "fhkh/quantities.hpp"

namespace fhkh {

enum class UnitChoice { Natural, Molecular };

/// Everything one CLI run needs. Defaults give the natural-unit screened Kratzer example.
struct RunConfig {
    UnitChoice units = UnitChoice::Natural;
    double hbar_c = default_hbar_c;
    double mass_scale = default_amu_energy;
    double mu = 1.0;
    std::string molecule; // empty: use mu
    PotentialKind kind = PotentialKind::SKHP;
    double V0 = -3.0;
    double V1 = 0.0;
    double V2 = 10.0;
    std::vector<double> alphas{0.1};
    int n_min = 0;
    int n_max = 2;
    std::string output; // empty: stdout
    int points = 4000;
    std::optional<double> t_max;
    double tolerance = 1e-5;

    UnitSystem unit_system() const {
        return units == UnitChoice::Natural ? natural_units() : molecular_units(hbar_c, mass_scale);
    }

    double reduced_mass() const { return molecule.empty() ? mu : find_molecule(molecule).mu; }

    PotentialParams params(double alpha) const { return make_special_case(kind, V0, V1, V2, alpha); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view v, int line) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || p != end) throw ConfigError(line, "not a number: '" + std::string(v) + "'");
    return x;
}

inline int parse_int(std::string_view v, int line) {
    int x = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || p != end) throw ConfigError(line, "not an integer: '" + std::string(v) + "'");
    return x;
}

inline std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

/**
 * `key = value` per line; `#` starts a comment. Unknown keys and malformed
 * lines raise ConfigError carrying the 1-based line number. `alpha` takes a
 * comma-separated list, `n` a range `lo..hi` or a single integer.
 */
inline RunConfig parse_config(std::string_view text) {
    RunConfig c;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const auto key = detail::trim(line.substr(0, eq));
        const auto val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError(line_no, "expected 'key = value'");

        if (key == "units") {
            if (val == "natural") c.units = UnitChoice::Natural;
            else if (val == "molecular") c.units = UnitChoice::Molecular;
            else throw ConfigError(line_no, "units must be 'natural' or 'molecular'");
        } else if (key == "hbar_c") {
            c.hbar_c = detail::parse_double(val, line_no);
        } else if (key == "mass_scale") {
            c.mass_scale = detail::parse_double(val, line_no);
        } else if (key == "mu") {
            c.mu = detail::parse_double(val, line_no);
        } else if (key == "molecule") {
            c.molecule = std::string(val);
        } else if (key == "kind") {
            const auto k = parse_kind(val);
            if (!k) throw ConfigError(line_no, "unknown potential kind '" + std::string(val) + "'");
            c.kind = *k;
        } else if (key == "V0") {
            c.V0 = detail::parse_double(val, line_no);
        } else if (key == "V1") {
            c.V1 = detail::parse_double(val, line_no);
        } else if (key == "V2") {
            c.V2 = detail::parse_double(val, line_no);
        } else if (key == "alpha") {
            c.alphas.clear();
            std::size_t p = 0;
            while (p <= val.size()) {
                const auto comma = val.find(',', p);
                const auto item = detail::trim(val.substr(p, comma == std::string_view::npos ? val.size() - p : comma - p));
                c.alphas.push_back(detail::parse_double(item, line_no));
                p = comma == std::string_view::npos ? val.size() + 1 : comma + 1;
            }
        } else if (key == "n") {
            const auto dots = val.find("..");
            if (dots == std::string_view::npos) {
                c.n_min = c.n_max = detail::parse_int(val, line_no);
            } else {
                c.n_min = detail::parse_int(detail::trim(val.substr(0, dots)), line_no);
                c.n_max = detail::parse_int(detail::trim(val.substr(dots + 2)), line_no);
            }
            if (c.n_min < 0 || c.n_max < c.n_min) throw ConfigError(line_no, "n range must satisfy 0 <= lo <= hi");
        } else if (key == "output") {
            c.output = std::string(val);
        } else if (key == "points") {
            c.points = detail::parse_int(val, line_no);
        } else if (key == "t_max") {
            c.t_max = detail::parse_double(val, line_no);
        } else if (key == "tolerance") {
            c.tolerance = detail::parse_double(val, line_no);
        } else {
            throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    return c;
}

/// Inverse of parse_config: parse_config(emit_config(c)) reproduces c.
inline std::string emit_config(const RunConfig& c) {
    std::ostringstream os;
    os << "units = " << (c.units == UnitChoice::Natural ? "natural" : "molecular") << '\n';
    os << "hbar_c = " << detail::fmt_double(c.hbar_c) << '\n';
    os << "mass_scale = " << detail::fmt_double(c.mass_scale) << '\n';
    os << "mu = " << detail::fmt_double(c.mu) << '\n';
    if (!c.molecule.empty()) os << "molecule = " << c.molecule << '\n';
    os << "kind = " << to_string(c.kind) << '\n';
    os << "V0 = " << detail::fmt_double(c.V0) << '\n';
    os << "V1 = " << detail::fmt_double(c.V1) << '\n';
    os << "V2 = " << detail::fmt_double(c.V2) << '\n';
    os << "alpha = ";
    for (std::size_t i = 0; i < c.alphas.size(); ++i) os << (i ? "," : "") << detail::fmt_double(c.alphas[i]);
    os << '\n';
    os << "n = " << c.n_min << ".." << c.n_max << '\n';
    if (!c.output.empty()) os << "output = " << c.output << '\n';
    os << "points = " << c.points << '\n';
    if (c.t_max) os << "t_max = " << detail::fmt_double(*c.t_max) << '\n';
    os << "tolerance = " << detail::fmt_double(c.tolerance) << '\n';
    return os.str();
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.units == b.units && a.hbar_c == b.hbar_c && a.mass_scale == b.mass_scale && a.mu == b.mu &&
           a.molecule == b.molecule && a.kind == b.kind && a.V0 == b.V0 && a.V1 == b.V1 && a.V2 == b.V2 &&
           a.alphas == b.alphas && a.n_min == b.n_min && a.n_max == b.n_max && a.output == b.output &&
           a.points == b.points && a.t_max == b.t_max && a.tolerance == b.tolerance;
}

} // namespace fhkh
