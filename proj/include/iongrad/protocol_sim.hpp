#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "iongrad/ion_crystal.hpp"
#include "iongrad/transduction.hpp"

namespace iongrad {

// Numerical model of the full measurement sequence on a two-qubit (x)
// truncated-Fock Hilbert space. This is the brute-force reference for the
// analytic transduction gain and contrast, so the SDF evolution is a plain
// time-ordered product of step propagators; it never uses the closed-form
// displacement/phase solution it is meant to check.

enum Spin : int { kDownDown = 0, kDownUp = 1, kUpDown = 2, kUpUp = 3 };

// Conventions the printed Hamiltonians leave open, kept in one place.
//
//   H_sdf(t) = hbar * g * (a e^{i delta t} + a^dag e^{-i delta t}) * s_hat
//   H_ext    = (e dEx / sqrt(2)) * x0 * (a + a^dag)
//
// s_hat has eigenvalues {+spin_weight, -spin_weight} on |ud>/|du> and 0 on
// |uu>/|dd>. Both drive rates are per-ion rates and enter the stretch-mode
// dynamics through the mode coordinate (x1 - x2)/sqrt(2), i.e. with an extra
// projection factor mode_projection = 1/sqrt(2) each. With these defaults the
// closed-loop relative phase equals gain()*dEx and the closure-error contrast
// equals contrast() identically, which the oracle tests verify.
struct SdfConvention {
  double spin_weight = 1.0;
  double mode_projection = 0.70710678118654752440;  // 1/sqrt(2)
};

struct ProtocolState {
  int n_max = 24;  // Fock truncation, >= 8
  // amplitudes[spin * (n_max+1) + n], basis {dd, du, ud, uu} (x) {|0>..|n_max>}
  std::vector<std::complex<double>> amplitudes;

  static ProtocolState ground(int n_max = 24);            // |dd>|0>
  static ProtocolState with_fock(int fock_n, int n_max);  // |dd>|n>

  int dim() const { return n_max + 1; }
  std::complex<double>& amp(int spin, int n) {
    return amplitudes[spin * dim() + n];
  }
  const std::complex<double>& amp(int spin, int n) const {
    return amplitudes[spin * dim() + n];
  }
  double norm() const;
  double spin_population(int spin) const;
  // Population in the top two Fock levels, the truncation-health indicator.
  double edge_leakage() const;
};

struct ShotResult {
  bool bright = false;    // bright <=> projected onto |dd>
  double p_bright = 0.0;  // probability used for sampling
};

struct PhaseEstimate {
  double phi_hat = 0.0;    // rad, in (0, pi) from the fringe inversion
  double std_error = 0.0;  // rad
  int shots = 0;
};

// Ideal entangling map: |dd> -> (|ud> + |du>)/sqrt(2) on the spin subspace.
// Requires spin support on |dd> only (any motional content).
ProtocolState prepare_bell(const ProtocolState& state);

// The raw entangling unitary and its inverse (spin subspace only).
ProtocolState apply_ms(const ProtocolState& state);
ProtocolState apply_ms_inverse(const ProtocolState& state);

// Evolves under H_sdf(t) + H_ext for seq.total_time using `steps` midpoint
// exponential steps. Throws TruncationError if edge leakage exceeds 1e-6.
ProtocolState evolve_sdf(const ProtocolState& state, const SdfSequence& seq,
                         const TwoIonCrystal& crystal, double delta_ex,
                         long steps, const SdfConvention& convention = {});

struct ConvergedEvolution {
  ProtocolState state;
  long steps = 0;          // step count of the accepted run
  double last_change = 0;  // sup-norm amplitude change at the last doubling
};

// Doubles the step count until halving the step changes the final amplitudes
// by less than `tol` (sup norm), escalating n_max automatically on truncation
// errors. Starts from `initial_steps` (0 picks a heuristic).
ConvergedEvolution evolve_sdf_converged(const ProtocolState& state,
                                        const SdfSequence& seq,
                                        const TwoIonCrystal& crystal,
                                        double delta_ex, double tol = 1e-8,
                                        long initial_steps = 0,
                                        const SdfConvention& convention = {});

// arg of the motional-traced spin coherence <du| rho |ud>: the phase phi with
// the post-interrogation state ~ (|ud> + e^{i phi} |du>)/sqrt(2).
double relative_phase(const ProtocolState& state);

// Normalized overlap of the conditional motional states attached to |ud> and
// |du>; |overlap| = 1 means spin and motion are disentangled.
std::complex<double> conditional_motional_overlap(const ProtocolState& state);

// P_dd after the inverse entangling map, with an analysis phase `bias` applied
// to the |du> branch beforehand (mid-fringe operation uses bias = pi/2).
double p_bright(const ProtocolState& state, double bias = 0.0);

// Applies the inverse map and samples bright/dark with the given seed.
ShotResult analyze_and_measure(const ProtocolState& state, std::uint64_t seed,
                               double bias = 0.0);

// M independent Bernoulli shots from one evolved state, one seeded stream.
std::vector<ShotResult> sample_shots(const ProtocolState& state, int shots,
                                     std::uint64_t seed, double bias = 0.0);

// Local fringe inversion phi = arccos(2 p - 1). Throws
// UnidentifiablePhaseError on an all-bright or all-dark sample. The 1/sqrt(M)
// std contract holds near mid-fringe for M >= 100.
PhaseEstimate estimate_phase(const std::vector<ShotResult>& shots);
PhaseEstimate estimate_phase_from_counts(long bright, long total);

// Boltzmann weights of a thermal stretch mode, truncated at cumulative
// probability `cumulative` and renormalized.
std::vector<double> boltzmann_weights(double nbar, double cumulative = 0.999);

}  // namespace iongrad
