#pragma once

#include "iongrad/ion_crystal.hpp"

namespace iongrad {

// One multi-loop SDF interrogation. The closure error is always derived from
// (delta, total_time, loops), never stored separately.
struct SdfSequence {
  double g = 0.0;           // SDF coupling rate, rad/s
  double delta = 0.0;       // detuning from the stretch mode, rad/s
  double total_time = 0.0;  // interrogation time T, s
  int loops = 1;            // loop count N
  double nbar = 0.0;        // initial thermal occupation

  static SdfSequence make(double g, double delta, double total_time, int loops,
                          double nbar = 0.0);
  // T chosen so that delta*T = 2 pi N (closed loops).
  static SdfSequence closed(double g, double delta, int loops,
                            double nbar = 0.0);
  // T chosen so that delta*T = 2 pi N + epsilon.
  static SdfSequence with_closure_error(double g, double delta, int loops,
                                        double epsilon, double nbar = 0.0);

  double closure_error() const;  // epsilon = delta*T - 2 pi N, rad
};

// Accumulated differential phase per unit differential field, rad/(V/m).
// Stored signed; the fringe P_bb = cos^2(phi/2) depends only on |phi|.
struct TransductionGain {
  double rad_per_field = 0.0;
};

// G_E = (sqrt(2) e g x0 / hbar) (sin(dT)/d^2 - T cos(dT)/d).
// At closure this evaluates to -2 pi N sqrt(2) e g x0 / (hbar d^2).
// Throws std::domain_error for delta = 0 (resonant drive out of scope).
TransductionGain gain(const SdfSequence& seq, const TwoIonCrystal& crystal);

double phase_from_field(const TransductionGain& gain, double delta_ex);

// Fringe contrast under a closure error: exp[-(2 nbar + 1) (g eps / delta)^2].
double contrast(const SdfSequence& seq);

}  // namespace iongrad
