#pragma once

namespace trionlab::units {

/// Hydrogen Rydberg and Bohr radius as used for the effective-mass scaling.
inline constexpr double rydberg_eV = 13.6;
inline constexpr double bohr_angstrom = 0.529;

struct Environment {
    double epsilon = 3.5;  ///< static relative dielectric constant, >= 1
    void validate() const;
};

struct EffectiveUnits {
    double rydberg = 0.0;  ///< eV
    double bohr = 0.0;     ///< Angstrom
};

EffectiveUnits effective_units(double mu, const Environment& env);
double dimensionless_radius(double r_angstrom, const EffectiveUnits& u);
double to_physical_energy(double e_rydberg, const EffectiveUnits& u);

} // namespace trionlab::units
