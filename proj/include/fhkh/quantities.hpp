#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "fhkh/errors.hpp"

namespace fhkh {

/**
 * Units in which potentials, times and momenta are expressed.
 *
 * Everything downstream only needs the combination A = 2 m c^2 / hbar^2,
 * obtained from hbar*c (energy x time-unit) and the rest energy of one
 * mass unit. Momenta are reported as energy/c, i.e. the value of P*c.
 */
struct UnitSystem {
    double hbar_c = 1.0;
    double mass_scale = 1.0;
    bool momentum_per_c = true;

    friend bool operator==(const UnitSystem&, const UnitSystem&) = default;
};

/// m = c = hbar = 1.
constexpr UnitSystem natural_units() noexcept { return UnitSystem{1.0, 1.0, true}; }

inline constexpr double default_hbar_c = 1973.269;        // eV x time-unit
inline constexpr double default_amu_energy = 931.494061e6; // eV per a.m.u.

/// eV, time-units and a.m.u., with momenta in eV/c.
constexpr UnitSystem molecular_units(double hbar_c = default_hbar_c,
                                     double mass_scale = default_amu_energy) {
    if (!(hbar_c > 0.0) || !(mass_scale > 0.0)) {
        throw DomainError("molecular_units: hbar_c and mass_scale must be positive");
    }
    return UnitSystem{hbar_c, mass_scale, true};
}

/// A = 2 m c^2 / hbar^2 and its reciprocal kappa = hbar^2 / (2 m c^2).
struct KineticCoefficients {
    double A;
    double kappa;
};

inline KineticCoefficients kinetic_coefficients(const UnitSystem& us, double mu) {
    if (!(mu > 0.0)) {
        throw DomainError("kinetic_coefficients: reduced mass must be positive");
    }
    if (!(us.hbar_c > 0.0) || !(us.mass_scale > 0.0)) {
        throw DomainError("kinetic_coefficients: unit system constants must be positive");
    }
    const double A = 2.0 * (mu * us.mass_scale) / (us.hbar_c * us.hbar_c);
    return {A, 1.0 / A};
}

/// One row of diatomic spectroscopic constants.
struct MoleculeSpec {
    std::string_view name;
    double D_e; // dissociation energy, eV
    double t_e; // equilibrium time-unit
    double mu;  // reduced mass, a.m.u.
};

inline constexpr std::array<MoleculeSpec, 5> molecules{{
    {"TiH", 2.05, 1.781, 0.987371},
    {"ScN", 4.56, 1.768, 10.682771},
    {"H2", 4.7446, 0.7416, 0.50391},
    {"CuLi", 1.74, 2.310, 6.259494},
    {"I2", 1.58179, 2.6620, 63.452235},
}};

constexpr const std::array<MoleculeSpec, 5>& molecule_catalog() noexcept { return molecules; }

/// Case-sensitive lookup by name; throws DomainError for unknown molecules.
inline const MoleculeSpec& find_molecule(std::string_view name) {
    const auto& cat = molecule_catalog();
    auto it = std::find_if(cat.begin(), cat.end(),
                           [&](const MoleculeSpec& m) { return m.name == name; });
    if (it == cat.end()) {
        throw DomainError("unknown molecule '" + std::string(name) + "'");
    }
    return *it;
}

} // namespace fhkh
