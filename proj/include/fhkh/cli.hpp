#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fhkh/config.hpp"
#include "fhkh/errors.hpp"
#include "fhkh/nu_analytic.hpp"
#include "fhkh/oracle.hpp"
#include "fhkh/potentials.hpp"
#include "fhkh/quantities.hpp"
#include "fhkh/table.hpp"

namespace fhkh::cli {

enum ExitCode : int { ok = 0, usage = 1, numerical = 2 };

struct VerifyCase {
    PotentialParams params;
    double P_analytic = 0.0;
    double P_fd = 0.0;
    double P_shoot = 0.0;
    bool pass = false;
};

inline double relative_difference(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Natural-unit SKHP draws with a well-branch ground state, compared against both oracles.
inline std::vector<VerifyCase> verify_cases(std::uint64_t seed, int cases, double tol) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const auto nat = natural_units();
    std::vector<VerifyCase> out;
    while (static_cast<int>(out.size()) < cases) {
        const double alpha = uniform(0.05, 0.5);
        const double V0 = uniform(-4.0, -1.0);
        const double V1 = uniform(0.0, 1.0);
        const double V2 = uniform(0.2, 6.0);
        const auto p = make_special_case(PotentialKind::SKHP, V0, V1, V2, alpha);
        const auto sol = momentum_eigenvalue(p, nat, 1.0, 0);
        if (!sol.well_branch()) continue;
        VerifyCase c{p, sol.P, 0.0, 0.0, false};
        c.P_fd = fd_eigenvalues_extrapolated(p, nat, 1.0, 1).eigenvalues.at(0);
        c.P_shoot = shooting_eigenvalue(p, nat, 1.0, 0);
        c.pass = relative_difference(c.P_analytic, c.P_fd) < tol && relative_difference(c.P_analytic, c.P_shoot) < tol;
        out.push_back(c);
    }
    return out;
}

namespace detail {

struct ModelFlags {
    std::string config_path;
    bool natural = false;
    bool molecular = false;
    std::optional<double> hbar_c, mass_scale, mu, V0, V1, V2, t_max;
    std::optional<std::string> molecule, kind, n_range;
    std::optional<int> points;
    std::vector<double> alphas;
    std::string output;
};

inline void add_model_options(CLI::App* sub, ModelFlags& f) {
    sub->add_option("--config", f.config_path, "key = value configuration file");
    auto* nat = sub->add_flag("--natural", f.natural, "m = c = hbar = 1");
    auto* mol = sub->add_flag("--molecular", f.molecular, "eV, time-units, a.m.u.");
    nat->excludes(mol);
    sub->add_option("--hbar-c", f.hbar_c, "hbar*c override (molecular units)");
    sub->add_option("--mass-scale", f.mass_scale, "rest energy of one mass unit (molecular units)");
    sub->add_option("--mu", f.mu, "reduced mass");
    sub->add_option("--molecule", f.molecule, "catalog molecule supplying mu");
    sub->add_option("--kind", f.kind, "skhp, hellmann, screened-kratzer, kratzer, screened-coulomb, coulomb");
    sub->add_option("--V0", f.V0);
    sub->add_option("--V1", f.V1);
    sub->add_option("--V2", f.V2);
    sub->add_option("--alpha", f.alphas, "screening parameter(s)")->delimiter(',');
    sub->add_option("--n", f.n_range, "quantum number or range lo..hi");
    sub->add_option("--points", f.points, "finite-difference grid points");
    sub->add_option("--t-max", f.t_max, "oracle domain override");
    sub->add_option("--output", f.output, "write CSV here instead of stdout");
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunConfig resolve(const ModelFlags& f) {
    RunConfig c = f.config_path.empty() ? RunConfig{} : parse_config(read_file(f.config_path));
    std::string overrides;
    if (f.natural) overrides += "units = natural\n";
    if (f.molecular) overrides += "units = molecular\n";
    if (f.kind) overrides += "kind = " + *f.kind + "\n";
    if (f.n_range) overrides += "n = " + *f.n_range + "\n";
    if (!overrides.empty()) {
        // Reuse the config parser for validation, then copy the touched fields.
        const RunConfig o = parse_config(overrides);
        if (f.natural || f.molecular) c.units = o.units;
        if (f.kind) c.kind = o.kind;
        if (f.n_range) {
            c.n_min = o.n_min;
            c.n_max = o.n_max;
        }
    }
    if (f.hbar_c) c.hbar_c = *f.hbar_c;
    if (f.mass_scale) c.mass_scale = *f.mass_scale;
    if (f.mu) c.mu = *f.mu;
    if (f.molecule) c.molecule = *f.molecule;
    if (f.V0) c.V0 = *f.V0;
    if (f.V1) c.V1 = *f.V1;
    if (f.V2) c.V2 = *f.V2;
    if (!f.alphas.empty()) c.alphas = f.alphas;
    if (f.points) c.points = *f.points;
    if (f.t_max) c.t_max = *f.t_max;
    if (!f.output.empty()) c.output = f.output;
    if (!c.molecule.empty()) find_molecule(c.molecule);
    if (c.alphas.empty()) throw DomainError("at least one alpha is required");
    return c;
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write '" + path + "'");
    f << text;
}

inline std::string eigenvalue_csv(const RunConfig& c, bool oracle) {
    const auto us = c.unit_system();
    const double mu = c.reduced_mass();
    std::vector<TableRow> rows;
    for (double alpha : c.alphas) {
        const auto p = c.params(alpha);
        std::optional<OracleResult> fd;
        for (int n = c.n_min; n <= c.n_max; ++n) {
            const auto sol = momentum_eigenvalue(p, us, mu, n);
            TableRow r{c.molecule, alpha, n, sol.P, std::nullopt, sol.valid, sol.branch(), std::nullopt};
            if (oracle && sol.well_branch()) {
                if (!fd) fd = fd_eigenvalues_extrapolated(p, us, mu, c.n_max + 1, {c.points, c.t_max});
                if (static_cast<std::size_t>(n) < fd->eigenvalues.size()) {
                    r.P_oracle = fd->eigenvalues[static_cast<std::size_t>(n)];
                }
            }
            rows.push_back(std::move(r));
        }
    }
    return emit_csv(rows);
}

} // namespace detail

/// Dispatches the subcommands; exit 0 on success, 1 on usage errors, 2 on numerical failure.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Feinberg-Horodecki momentum spectra of the screened Kratzer-Hellmann potential", "fhkh"};
    app.require_subcommand(1);

    detail::ModelFlags eig_f;
    bool eig_oracle = false;
    auto* eig = app.add_subcommand("eigenvalues", "closed-form momenta as CSV");
    detail::add_model_options(eig, eig_f);
    eig->add_flag("--oracle", eig_oracle, "add finite-difference values for well-branch states");

    detail::ModelFlags wf_f;
    std::optional<double> wf_t_min, wf_t_end;
    int wf_count = 200;
    auto* wf = app.add_subcommand("wavefunction", "normalised state psi_n(t) as CSV");
    detail::add_model_options(wf, wf_f);
    wf->add_option("--t-min", wf_t_min);
    wf->add_option("--t-end", wf_t_end);
    wf->add_option("--count", wf_count)->check(CLI::Range(2, 1000000));

    detail::ModelFlags pc_f;
    double pc_t_min = 0.05;
    double pc_t_end = 20.0;
    int pc_count = 200;
    bool pc_approx = false;
    auto* pc = app.add_subcommand("potential-curve", "V(t) samples as CSV");
    detail::add_model_options(pc, pc_f);
    pc->add_option("--t-min", pc_t_min);
    pc->add_option("--t-end", pc_t_end);
    pc->add_option("--count", pc_count);
    pc->add_flag("--approx", pc_approx, "sample the screened-1/t approximation instead");

    std::uint64_t seed = 7;
    int cases = 20;
    double vtol = 1e-5;
    auto* ver = app.add_subcommand("verify", "random closed-form vs oracle comparisons");
    ver->add_option("--seed", seed);
    ver->add_option("--cases", cases)->check(CLI::PositiveNumber);
    ver->add_option("--tolerance", vtol);

    std::string which = "skp";
    std::string molecules = "all";
    std::string mode = "caption";
    bool tbl_oracle = false;
    bool tbl_delta = false;
    bool tbl_molecular = true;
    std::optional<double> tbl_hbar_c, tbl_mass_scale;
    std::string tbl_output;
    auto* tbl = app.add_subcommand("table", "regenerate a molecule table");
    tbl->add_option("--which", which, "skp, hellmann or skhp")->check(CLI::IsMember({"skp", "hellmann", "skhp"}));
    tbl->add_option("--molecules", molecules, "'all' or a comma-separated list");
    tbl->add_option("--mode", mode, "caption or molecule")->check(CLI::IsMember({"caption", "molecule"}));
    tbl->add_flag("--oracle", tbl_oracle);
    tbl->add_flag("--delta", tbl_delta, "append the difference to the published digits");
    tbl->add_flag("!--natural", tbl_molecular, "use natural units instead of molecular units");
    tbl->add_option("--hbar-c", tbl_hbar_c);
    tbl->add_option("--mass-scale", tbl_mass_scale);
    tbl->add_option("--output", tbl_output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        for (auto* sub : app.get_subcommands()) err << sub->help();
        if (app.get_subcommands().empty()) err << app.help();
        return usage;
    }

    try {
        if (eig->parsed()) {
            const auto c = detail::resolve(eig_f);
            detail::write_output(detail::eigenvalue_csv(c, eig_oracle), c.output, out);
        } else if (wf->parsed()) {
            const auto c = detail::resolve(wf_f);
            const auto p = c.params(c.alphas.front());
            const auto w = normalized(wavefunction_spec(p, c.unit_system(), c.reduced_mass(), c.n_min));
            const double t0 = wf_t_min.value_or(1e-3 / w.decay);
            const double t1 = wf_t_end.value_or(40.0 / w.decay);
            if (!(t0 > 0.0) || !(t1 > t0)) throw DomainError("need 0 < t-min < t-end");
            std::string text = "t,psi\n";
            for (int i = 0; i < wf_count; ++i) {
                const double t = i == wf_count - 1 ? t1 : t0 + (t1 - t0) * i / (wf_count - 1);
                text += format_number(t) + ',' + format_number(evaluate_wavefunction(w, t)) + '\n';
            }
            detail::write_output(text, c.output, out);
        } else if (pc->parsed()) {
            const auto c = detail::resolve(pc_f);
            const auto p = c.params(c.alphas.front());
            std::string text = "t,V\n";
            for (const auto& s : sample_potential(p, pc_t_min, pc_t_end, pc_count, pc_approx)) {
                text += format_number(s.t) + ',' + format_number(s.V) + '\n';
            }
            detail::write_output(text, c.output, out);
        } else if (ver->parsed()) {
            const auto results = verify_cases(seed, cases, vtol);
            std::string text = "case,alpha,V0,V1,V2,P_analytic,P_fd,P_shoot,pass\n";
            int failed = 0;
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& r = results[i];
                text += std::to_string(i) + ',' + format_number(r.params.alpha) + ',' + format_number(r.params.V0) +
                        ',' + format_number(r.params.V1) + ',' + format_number(r.params.V2) + ',' +
                        format_number(r.P_analytic) + ',' + format_number(r.P_fd) + ',' + format_number(r.P_shoot) +
                        (r.pass ? ",1\n" : ",0\n");
                if (!r.pass) ++failed;
            }
            out << text;
            if (failed > 0) {
                err << failed << " of " << results.size() << " cases outside tolerance " << vtol << '\n';
                return numerical;
            }
        } else if (tbl->parsed()) {
            std::vector<std::string> names;
            if (molecules == "all") {
                names = all_table_molecules();
            } else {
                std::stringstream ss(molecules);
                for (std::string item; std::getline(ss, item, ',');) {
                    find_molecule(item);
                    names.push_back(item);
                }
            }
            const UnitSystem us = tbl_molecular ? molecular_units(tbl_hbar_c.value_or(default_hbar_c),
                                                                  tbl_mass_scale.value_or(default_amu_energy))
                                                : natural_units();
            TableOptions opt;
            opt.mode = mode == "molecule" ? ParameterMode::Molecule : ParameterMode::Caption;
            opt.oracle = tbl_oracle;
            opt.deltas = tbl_delta;
            const auto rows = build_table(*parse_table_kind(which), names, us, opt);
            detail::write_output(emit_csv(rows, tbl_delta), tbl_output, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::runtime_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical;
    }
    return ok;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"fhkh"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace fhkh::cli
