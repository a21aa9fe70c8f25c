#pragma once

// Physical constants (CODATA 2018). Single source of truth for every module;
// all internal quantities are strict SI. Debye, angstrom, amu and um are
// accepted only at I/O boundaries via the conversion factors below.

namespace iongrad::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double epsilon0 = 8.8541878128e-12;          // F/m
inline constexpr double coulomb_k = 1.0 / (4.0 * pi * epsilon0);
inline constexpr double atomic_mass = 1.66053906660e-27;      // kg
inline constexpr double debye = 3.33564e-30;                  // C m
inline constexpr double angstrom = 1e-10;                     // m

// e * (1 angstrom) expressed in Debye, kept exact rather than the rounded 4.80.
inline constexpr double debye_per_e_angstrom =
    elementary_charge * angstrom / debye;

inline constexpr double yb171_mass_u = 170.936330;
inline constexpr double ca40_mass_u = 39.962591;

}  // namespace iongrad::constants
