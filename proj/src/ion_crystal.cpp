#include "iongrad/ion_crystal.hpp"

#include <cmath>
#include <stdexcept>

#include "iongrad/constants.hpp"

namespace iongrad {

IonSpecies IonSpecies::from_amu(double mass_u, int charge) {
  if (!(mass_u > 0.0)) throw std::domain_error("ion mass must be > 0");
  if (charge < 1) throw std::domain_error("ion charge must be >= 1");
  return IonSpecies{mass_u * constants::atomic_mass, charge};
}

IonSpecies IonSpecies::yb171() { return from_amu(constants::yb171_mass_u); }
IonSpecies IonSpecies::ca40() { return from_amu(constants::ca40_mass_u); }

double equilibrium_separation(const IonSpecies& species, double omega_x) {
  if (!(omega_x > 0.0)) throw std::domain_error("trap frequency must be > 0");
  const double ze = species.charge * constants::elementary_charge;
  const double d3 = ze * ze /
                    (2.0 * constants::pi * constants::epsilon0 * species.mass *
                     omega_x * omega_x);
  return std::cbrt(d3);
}

TwoIonCrystal TwoIonCrystal::make(const IonSpecies& species, double omega_x) {
  TwoIonCrystal crystal;
  crystal.species = species;
  crystal.omega_x = omega_x;
  crystal.separation = equilibrium_separation(species, omega_x);
  crystal.omega_stretch = std::sqrt(3.0) * omega_x;
  crystal.x0 =
      std::sqrt(constants::hbar / (2.0 * species.mass * crystal.omega_stretch));
  return crystal;
}

StretchMode stretch_mode(const TwoIonCrystal& crystal) {
  return StretchMode{crystal.omega_stretch, crystal.x0};
}

}  // namespace iongrad
