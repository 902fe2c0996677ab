#include "trionlab/effective_units.hpp"
#include "trionlab/errors.hpp"

namespace trionlab::units {

void Environment::validate() const
{
    if (!(epsilon >= 1.0)) throw DomainError("dielectric constant must be >= 1");
}

EffectiveUnits effective_units(double mu, const Environment& env)
{
    env.validate();
    if (!(mu > 0.0)) throw DomainError("reduced mass must be positive");
    return {rydberg_eV * mu / (env.epsilon * env.epsilon), bohr_angstrom * env.epsilon / mu};
}

double dimensionless_radius(double r_angstrom, const EffectiveUnits& u)
{
    if (!(r_angstrom > 0.0)) throw DomainError("radius must be positive");
    return r_angstrom / u.bohr;
}

double to_physical_energy(double e_rydberg, const EffectiveUnits& u) { return e_rydberg * u.rydberg; }

} // namespace trionlab::units
