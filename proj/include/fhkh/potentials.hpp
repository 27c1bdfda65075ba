#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fhkh/errors.hpp"
#include "fhkh/quantities.hpp"

namespace fhkh {

/// The screened Kratzer-Hellmann family and its five reductions.
enum class PotentialKind {
    SKHP,
    Hellmann,        // V2 = 0
    ScreenedKratzer, // V1 = 0
    Kratzer,         // V1 = alpha = 0
    ScreenedCoulomb, // V1 = V2 = 0
    Coulomb,         // V1 = V2 = alpha = 0
};

inline constexpr PotentialKind all_kinds[] = {
    PotentialKind::SKHP,    PotentialKind::Hellmann,        PotentialKind::ScreenedKratzer,
    PotentialKind::Kratzer, PotentialKind::ScreenedCoulomb, PotentialKind::Coulomb,
};

constexpr std::string_view to_string(PotentialKind k) noexcept {
    switch (k) {
    case PotentialKind::SKHP: return "skhp";
    case PotentialKind::Hellmann: return "hellmann";
    case PotentialKind::ScreenedKratzer: return "screened-kratzer";
    case PotentialKind::Kratzer: return "kratzer";
    case PotentialKind::ScreenedCoulomb: return "screened-coulomb";
    case PotentialKind::Coulomb: return "coulomb";
    }
    return "?";
}

inline std::optional<PotentialKind> parse_kind(std::string_view s) noexcept {
    for (auto k : all_kinds) {
        if (to_string(k) == s) return k;
    }
    if (s == "skp") return PotentialKind::ScreenedKratzer;
    if (s == "yukawa") return PotentialKind::ScreenedCoulomb;
    return std::nullopt;
}

/**
 * V(t) = (V0/t + (V1/t) e^{alpha t} + V2/t^2) e^{-alpha t}.
 *
 * Units: V0, V1 in energy x time-unit, V2 in energy x time-unit^2,
 * alpha in 1/time-unit.
 */
struct PotentialParams {
    double V0 = 0.0;
    double V1 = 0.0;
    double V2 = 0.0;
    double alpha = 0.0;
    PotentialKind kind = PotentialKind::SKHP;

    bool is_unscreened() const noexcept { return alpha == 0.0; }
};

/// Returns the first violated constraint for `kind`, or nullopt.
inline std::optional<std::string> kind_violation(PotentialKind kind, double V1, double V2,
                                                 double alpha) {
    const auto name = std::string(to_string(kind));
    if (!(alpha >= 0.0)) return name + " requires alpha>=0";
    switch (kind) {
    case PotentialKind::SKHP: break;
    case PotentialKind::Hellmann:
        if (V2 != 0.0) return name + " requires V2=0";
        break;
    case PotentialKind::ScreenedKratzer:
        if (V1 != 0.0) return name + " requires V1=0";
        break;
    case PotentialKind::Kratzer:
        if (V1 != 0.0) return name + " requires V1=0";
        if (alpha != 0.0) return name + " requires alpha=0";
        break;
    case PotentialKind::ScreenedCoulomb:
        if (V1 != 0.0) return name + " requires V1=0";
        if (V2 != 0.0) return name + " requires V2=0";
        break;
    case PotentialKind::Coulomb:
        if (V1 != 0.0) return name + " requires V1=0";
        if (V2 != 0.0) return name + " requires V2=0";
        if (alpha != 0.0) return name + " requires alpha=0";
        break;
    }
    return std::nullopt;
}

inline PotentialParams make_special_case(PotentialKind kind, double V0, double V1, double V2,
                                         double alpha) {
    if (!std::isfinite(V0) || !std::isfinite(V1) || !std::isfinite(V2) || !std::isfinite(alpha)) {
        throw DomainError("potential parameters must be finite");
    }
    if (auto why = kind_violation(kind, V1, V2, alpha)) {
        throw KindError(*why);
    }
    return PotentialParams{V0, V1, V2, alpha, kind};
}

inline void check_kind(const PotentialParams& p) {
    if (auto why = kind_violation(p.kind, p.V1, p.V2, p.alpha)) throw KindError(*why);
}

/// Kratzer parameters V0 = -2 De te, V2 = De te^2 for a catalog molecule.
inline PotentialParams kratzer_params_from_molecule(const MoleculeSpec& mol) {
    return make_special_case(PotentialKind::Kratzer, -2.0 * mol.D_e * mol.t_e, 0.0,
                             mol.D_e * mol.t_e * mol.t_e, 0.0);
}

// The V1 term is written without e^{alpha t} e^{-alpha t} so it cannot overflow.
inline double evaluate_potential(const PotentialParams& p, double t) {
    if (!(t > 0.0)) throw DomainError("evaluate_potential: t must be positive");
    return (p.V0 / t + p.V2 / (t * t)) * std::exp(-p.alpha * t) + p.V1 / t;
}

namespace reduced {

inline double hellmann(double V0, double V1, double alpha, double t) {
    return V0 / t * std::exp(-alpha * t) + V1 / t;
}

inline double screened_kratzer(double V0, double V2, double alpha, double t) {
    return (V0 / t + V2 / (t * t)) * std::exp(-alpha * t);
}

inline double kratzer(double V0, double V2, double t) { return V0 / t + V2 / (t * t); }

inline double screened_coulomb(double V0, double alpha, double t) {
    return V0 / t * std::exp(-alpha * t);
}

inline double coulomb(double V0, double t) { return V0 / t; }

} // namespace reduced

/// alpha / (1 - e^{-alpha t}), the screened stand-in for 1/t.
inline double screened_inverse_time(double alpha, double t) {
    return alpha / -std::expm1(-alpha * t);
}

/**
 * The potential with every 1/t replaced by alpha/(1 - e^{-alpha t}).
 * The closed-form spectrum is exact for this operator, not for V(t).
 */
inline double evaluate_approx_potential(const PotentialParams& p, double t) {
    if (!(t > 0.0)) throw DomainError("evaluate_approx_potential: t must be positive");
    if (!(p.alpha > 0.0)) {
        throw DomainError(
            "evaluate_approx_potential: alpha must be positive; use evaluate_potential for alpha=0");
    }
    const double u = screened_inverse_time(p.alpha, t);
    return (p.V0 * u + p.V2 * u * u) * std::exp(-p.alpha * t) + p.V1 * u;
}

/// t -> infinity limit of the approximated potential, alpha*V1.
inline double continuum_threshold(const PotentialParams& p) noexcept { return p.alpha * p.V1; }

struct PotentialSample {
    double t;
    double V;
};

inline std::vector<PotentialSample> sample_potential(const PotentialParams& p, double t_min,
                                                     double t_max, int count,
                                                     bool approximated = false) {
    if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
        throw DomainError("sample_potential: need 0 < t_min < t_max and count >= 2");
    }
    std::vector<PotentialSample> out;
    out.reserve(static_cast<std::size_t>(count));
    const double step = (t_max - t_min) / (count - 1);
    for (int i = 0; i < count; ++i) {
        const double t = (i == count - 1) ? t_max : t_min + i * step;
        out.push_back({t, approximated ? evaluate_approx_potential(p, t) : evaluate_potential(p, t)});
    }
    return out;
}

} // namespace fhkh
