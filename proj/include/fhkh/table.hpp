#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fhkh/errors.hpp"
#include "fhkh/nu_analytic.hpp"
#include "fhkh/oracle.hpp"
#include "fhkh/potentials.hpp"
#include "fhkh/quantities.hpp"

namespace fhkh {

struct TableRow {
    std::string molecule;
    double alpha = 0.0;
    int n = 0;
    double P_analytic = 0.0;
    std::optional<double> P_oracle;
    bool valid = false;
    int branch = 0;
    std::optional<double> delta; // P_analytic minus the published value
};

/// 9 significant digits, shortest form ("-0.06125", not "-0.0612500000").
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline constexpr std::string_view csv_header = "molecule,alpha,n,P_analytic,P_oracle,valid,branch";

/// LF line endings; empty P_oracle when no oracle was run.
inline std::string emit_csv(std::span<const TableRow> rows, bool with_delta = false) {
    std::string out(csv_header);
    if (with_delta) out += ",delta_vs_published";
    out += '\n';
    for (const auto& r : rows) {
        out += r.molecule;
        out += ',' + format_number(r.alpha);
        out += ',' + std::to_string(r.n);
        out += ',' + format_number(r.P_analytic);
        out += ',' + (r.P_oracle ? format_number(*r.P_oracle) : std::string());
        out += r.valid ? ",1" : ",0";
        out += ',' + std::to_string(r.branch);
        if (with_delta) out += ',' + (r.delta ? format_number(*r.delta) : std::string());
        out += '\n';
    }
    return out;
}

enum class TableKind { SKP, Hellmann, SKHP };

constexpr std::string_view to_string(TableKind k) noexcept {
    switch (k) {
    case TableKind::SKP: return "skp";
    case TableKind::Hellmann: return "hellmann";
    case TableKind::SKHP: return "skhp";
    }
    return "?";
}

inline std::optional<TableKind> parse_table_kind(std::string_view s) noexcept {
    for (auto k : {TableKind::SKP, TableKind::Hellmann, TableKind::SKHP}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

inline constexpr std::array<double, 4> table_alphas{0.001, 0.01, 0.1, 1.0};
inline constexpr int table_n_max = 3;

/// Molecule order of the published tables.
inline constexpr std::array<std::string_view, 5> table_molecules{"I2", "TiH", "ScN", "H2", "CuLi"};

/// Caption mode: the fixed V0, V1, V2 printed with each table, mu from the catalog.
/// Molecule mode: V0 = -2 De te, V2 = De te^2 from the catalog, V1 from the caption.
enum class ParameterMode { Caption, Molecule };

inline PotentialParams table_params(TableKind k, ParameterMode mode, const MoleculeSpec& mol, double alpha) {
    switch (k) {
    case TableKind::SKP:
        if (mode == ParameterMode::Molecule) {
            return make_special_case(PotentialKind::ScreenedKratzer, -2.0 * mol.D_e * mol.t_e, 0.0,
                                     mol.D_e * mol.t_e * mol.t_e, alpha);
        }
        return make_special_case(PotentialKind::ScreenedKratzer, -3.0, 0.0, 10.0, alpha);
    case TableKind::Hellmann:
        if (mode == ParameterMode::Molecule) {
            throw DomainError("molecule-derived parameters need a V2 term; the hellmann table has none");
        }
        return make_special_case(PotentialKind::Hellmann, 3.0, 5.0, 0.0, alpha);
    case TableKind::SKHP:
        if (mode == ParameterMode::Molecule) {
            return make_special_case(PotentialKind::SKHP, -2.0 * mol.D_e * mol.t_e, 5.0,
                                     mol.D_e * mol.t_e * mol.t_e, alpha);
        }
        return make_special_case(PotentialKind::SKHP, -3.0, 5.0, 10.0, alpha);
    }
    throw KindError("unknown table kind");
}

namespace detail {

using PublishedBlock = std::array<std::array<double, 4>, 4>; // [alpha][n]

inline constexpr std::array<PublishedBlock, 5> published_skp{{
    {{{-0.382998564, -0.363610557, -0.345650694, -0.328982080},
      {-0.364335155, -0.344962250, -0.327017880, -0.310365149},
      {-0.203339870, -0.185477225, -0.169082120, -0.154017659},
      {-1.157267601, -1.290430915, -1.428962341, -1.572724983}}},
    {{{-0.386226660, -0.249403938, -0.173991739, -0.128064754},
      {-0.370009486, -0.233302525, -0.158031152, -0.112270061},
      {-0.226967331, -0.101836412, -0.040647740, -0.011476005},
      {-0.709504293, -1.741977703, -3.089059016, -4.718822923}}},
    {{{-1.072492035, -0.961920092, -0.867548609, -0.786360699},
      {-1.036586258, -0.926057079, -0.831730677, -0.750590166},
      {-0.711151001, -0.604898248, -0.515079953, -0.438679231},
      {-0.819049236, -1.140439095, -1.501431558, -1.899009739}}},
    {{{-0.644495629, -0.303438242, -0.175331183, -0.113740718},
      {-0.628780486, -0.287855565, -0.159930087, -0.098570319},
      {-0.482297309, -0.154618931, -0.044851587, -0.006561545},
      {-0.084290853, -1.081266746, -2.787312809, -5.055995309}}},
    {{{-0.394473035, -0.332591591, -0.284143245, -0.245503715},
      {-0.376637860, -0.314803045, -0.266405282, -0.227820289},
      {-0.220977375, -0.163805462, -0.120466000, -0.087334707},
      {-0.933498922, -1.342617140, -1.805107747, -2.317346460}}},
}};

inline constexpr std::array<PublishedBlock, 5> published_hellmann{{
    {{{0.004210728, 0.004210722, 0.004210712, 0.004210698},
      {0.042107102, 0.042106511, 0.042105526, 0.042104147},
      {0.421053294, 0.420994194, 0.420895695, 0.420757796},
      {4.208759954, 4.202849996, 4.193000067, 4.179210167}}},
    {{{0.003650923, 0.003650544, 0.003649911, 0.003649024},
      {0.036497840, 0.036459860, 0.036396561, 0.036307942},
      {0.363839012, 0.360041047, 0.353711107, 0.344849189},
      {3.524451184, 3.144654734, 2.511660652, 1.625468937}}},
    {{{0.008062068, 0.008062033, 0.008061975, 0.008061893},
      {0.080619630, 0.080616120, 0.080610269, 0.080602078},
      {0.806090989, 0.805739957, 0.805154902, 0.804335827},
      {8.050378916, 8.015275664, 7.956770245, 7.874862657}}},
    {{{0.003518347, 0.003517603, 0.003516363, 0.003514626},
      {0.035161148, 0.035086730, 0.034962699, 0.034789057},
      {0.349378934, 0.341937129, 0.329534121, 0.312169909},
      {3.270535191, 2.526354682, 1.286053835, -0.450367352}}},
    {{{0.004019380, 0.004019320, 0.004019220, 0.004019080},
      {0.040192003, 0.040186012, 0.040176027, 0.040162049},
      {0.401740303, 0.401141213, 0.400142730, 0.398744854},
      {3.999430335, 3.939521339, 3.839673012, 3.699885356}}},
}};

inline constexpr std::array<PublishedBlock, 5> published_skhp{{
    {{{-0.378787834, -0.359399827, -0.341439964, -0.324771350},
      {-0.322227856, -0.302854951, -0.284910581, -0.268257849},
      {0.217733124, 0.235595769, 0.251990874, 0.267055335},
      {3.053462339, 2.920299025, 2.781767599, 2.638004956}}},
    {{{-0.382575610, -0.245752888, -0.170340689, -0.124413704},
      {-0.333498986, -0.196792025, -0.121520652, -0.075759561},
      {0.138137669, 0.263268588, 0.324457260, 0.353628995},
      {2.941545707, 1.909072297, 0.561990984, -1.067772923}}},
    {{{-1.064429955, -0.953858012, -0.859486529, -0.778298619},
      {-0.955965458, -0.845436279, -0.751109877, -0.669969366},
      {0.095056999, 0.201309752, 0.291128047, 0.367528769},
      {7.243030764, 6.921640905, 6.560648442, 6.163070261}}},
    {{{-0.640977033, -0.299919647, -0.171812588, -0.110222123},
      {-0.593594532, -0.252669611, -0.124744134, -0.063384366},
      {-0.130437773, 0.197240605, 0.307007949, 0.345297991},
      {3.434304507, 2.437328614, 0.731282551, -1.537399949}}},
    {{{-0.390453635, -0.328572191, -0.280123845, -0.241484315},
      {-0.336443860, -0.274609045, -0.226211282, -0.187626289},
      {0.180962625, 0.238134538, 0.281474000, 0.314605293},
      {3.085901078, 2.676782860, 2.214292253, 1.702053540}}},
}};

inline std::optional<std::size_t> index_of(std::span<const double> xs, double x) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] == x) return i;
    }
    return std::nullopt;
}

} // namespace detail

/// Published momentum (eV/c) for a table cell, if that cell exists.
inline std::optional<double> published_value(TableKind k, std::string_view molecule, double alpha, int n) {
    std::optional<std::size_t> mi;
    for (std::size_t i = 0; i < table_molecules.size(); ++i) {
        if (table_molecules[i] == molecule) mi = i;
    }
    const auto ai = detail::index_of(table_alphas, alpha);
    if (!mi || !ai || n < 0 || n > table_n_max) return std::nullopt;
    const auto& src = k == TableKind::SKP        ? detail::published_skp
                      : k == TableKind::Hellmann ? detail::published_hellmann
                                                 : detail::published_skhp;
    return src[*mi][*ai][static_cast<std::size_t>(n)];
}

struct TableOptions {
    ParameterMode mode = ParameterMode::Caption;
    bool oracle = false;  // finite-difference oracle for well-branch states
    bool deltas = false;
    OracleSettings oracle_settings{};
};

/// Rows ordered molecule, alpha, n, in the order of `molecules`.
inline std::vector<TableRow> build_table(TableKind k, std::span<const std::string> molecules, const UnitSystem& us,
                                         const TableOptions& opt = {}) {
    std::vector<TableRow> rows;
    for (const auto& name : molecules) {
        const auto& mol = find_molecule(name);
        for (double alpha : table_alphas) {
            const auto p = table_params(k, opt.mode, mol, alpha);
            std::optional<OracleResult> oracle;
            for (int n = 0; n <= table_n_max; ++n) {
                const auto sol = momentum_eigenvalue(p, us, mol.mu, n);
                TableRow r{std::string(mol.name), alpha, n, sol.P, std::nullopt, sol.valid, sol.branch(), std::nullopt};
                if (!std::isfinite(r.P_analytic)) throw NumericalError("non-finite momentum for " + r.molecule);
                if (opt.oracle && sol.well_branch()) {
                    if (!oracle) oracle = fd_eigenvalues_extrapolated(p, us, mol.mu, table_n_max + 1, opt.oracle_settings);
                    if (static_cast<std::size_t>(n) < oracle->eigenvalues.size()) {
                        r.P_oracle = oracle->eigenvalues[static_cast<std::size_t>(n)];
                    }
                }
                if (opt.deltas) {
                    if (const auto pub = published_value(k, mol.name, alpha, n)) r.delta = sol.P - *pub;
                }
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

inline std::vector<std::string> all_table_molecules() {
    return {table_molecules.begin(), table_molecules.end()};
}

/// +1 strictly increasing, -1 strictly decreasing, 0 otherwise.
inline int monotone_direction(std::span<const double> xs) {
    bool up = true;
    bool down = true;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) up = false;
        if (!(xs[i] < xs[i - 1])) down = false;
    }
    return up ? 1 : (down ? -1 : 0);
}

} // namespace fhkh
