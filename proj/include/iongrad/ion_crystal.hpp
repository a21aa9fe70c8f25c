#pragma once

namespace iongrad {

struct IonSpecies {
  double mass = 0.0;  // kg
  int charge = 1;     // in units of e

  static IonSpecies from_amu(double mass_u, int charge = 1);
  static IonSpecies yb171();
  static IonSpecies ca40();
};

// Equilibrium separation of two equal ions in a harmonic axial well:
//   d = (Z^2 e^2 / (2 pi eps0 m omega_x^2))^(1/3)
double equilibrium_separation(const IonSpecies& species, double omega_x);

// Two-ion crystal with its derived axial stretch mode. omega_x is the axial
// trap angular frequency (rad/s); the stretch mode sits at sqrt(3) omega_x and
// x0 = sqrt(hbar / (2 m omega_stretch)) is its ground-state extent.
struct TwoIonCrystal {
  IonSpecies species;
  double omega_x = 0.0;       // rad/s
  double separation = 0.0;    // m, derived
  double omega_stretch = 0.0; // rad/s, derived
  double x0 = 0.0;            // m, derived

  static TwoIonCrystal make(const IonSpecies& species, double omega_x);
};

struct StretchMode {
  double omega_stretch = 0.0;
  double x0 = 0.0;
};

StretchMode stretch_mode(const TwoIonCrystal& crystal);

}  // namespace iongrad
