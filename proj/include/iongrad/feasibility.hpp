#pragma once

#include <string>
#include <vector>

#include "iongrad/electrostatics.hpp"
#include "iongrad/ion_crystal.hpp"
#include "iongrad/noise_model.hpp"

namespace iongrad {

// Shot cadence: T_live of coherent interrogation, T_dead of overhead.
struct AveragingPlan {
  double t_live = 0.0;  // s
  double t_dead = 0.0;  // s
  double f0 = 0.0;      // Hz, demodulation frequency

  static AveragingPlan make(double t_live, double t_dead, double f0);
  double duty_cycle() const { return t_live / (t_live + t_dead); }
};

struct ShotBudget {
  long shots = 0;         // M = floor(T_tot / (T_live + T_dead))
  double live_time = 0.0; // M * T_live
  bool degenerate = false;  // T_tot shorter than one shot period
};

ShotBudget shot_budget(const AveragingPlan& plan, double t_total);

struct ThroughputBudget {
  double t_setup = 0.0, t_align = 0.0, t_cal = 0.0;  // s
  int n_avg = 1;

  static ThroughputBudget make(double t_setup, double t_align, double t_cal,
                               int n_avg);
};

// Everything needed for the end-to-end feasibility arithmetic.
struct FeasibilityScenario {
  GradiometerGeometry geometry;
  DipoleMoment dipole;
  InterfaceModel interface;
  TwoIonCrystal crystal;
  NoiseBudget budget;
  AveragingPlan plan;
  OrientationPolicy policy = OrientationPolicy::isotropic_rms;
  double snr_target = 1.0;
  // Evaluation point of the sample PSD in DC mode ("within the echo
  // bandwidth"); defaults to 1/(2 T_live) when <= 0.
  double dc_band_center = 0.0;

  double delta_ex_max() const;   // eta applied, V/m
  double signal_rms() const;     // orientation policy applied, V/m
  double noise_frequency() const;  // f0 (AC) or the DC band center
  double total_noise_asd() const;
};

struct SnrReport {
  double value = 0.0;
  bool zero_signal = false;
};

// SNR(T_tot) = (dE_rms / s_tot) sqrt(D T_tot).
SnrReport snr(const FeasibilityScenario& scenario, double t_total);

// tau = (snr_target s_tot / dE_rms)^2 / D. Throws InfeasibleError on zero
// signal.
double integration_time(const FeasibilityScenario& scenario);

// The linear-in-baseline leverage rule tau -> tau (d_from/d_to)^2. This holds
// the geometry factor fixed; re-evaluating the full closed form at the new
// baseline gives a different number once d/h is no longer small, which sweep()
// reports honestly.
double baseline_leverage_tau(double tau, double d_from, double d_to);

// Sites per day: 86400 / (T_setup + T_align + T_cal + N_avg tau).
double throughput(const FeasibilityScenario& scenario,
                  const ThroughputBudget& overheads);

// ---- lock-in demodulation ------------------------------------------------

struct ShotSample {
  double time = 0.0;   // s
  double value = 0.0;  // per-shot field estimate, V/m
};

struct LockinReference {
  double f0 = 0.0;           // Hz
  bool phase_cycling = false;  // flip the toggling sign every full cycle
};

struct LockinResult {
  double estimate = 0.0;  // mean of sign-multiplied samples
  long used = 0;
};

// Square-wave reference signs at the sample timestamps. With phase cycling the
// sign pattern of cycle c is additionally multiplied by (-1)^c.
std::vector<double> reference_signs(const std::vector<double>& times,
                                    const LockinReference& ref);

// Demodulates with signs derived from `ref`; needs at least two full cycles.
LockinResult lockin_demodulate(const std::vector<ShotSample>& stream,
                               const LockinReference& ref);
// Explicit-sign overload; throws std::invalid_argument on length mismatch.
LockinResult lockin_demodulate(const std::vector<ShotSample>& stream,
                               const std::vector<double>& signs);

// Fundamental-projection constant of square-wave demodulation: a pure tone of
// amplitude a at f0 demodulates to a * 2/pi.
inline constexpr double kSquareWaveDemodFactor = 0.63661977236758134308;

// ---- parameter sweeps ------------------------------------------------------

struct SweepAxis {
  std::string name;  // h_um, d_um, delta_p_debye, epsilon_r, s_sample, snr_target
  std::vector<double> values;
};

struct SweepRow {
  double h_um, d_um, delta_p_debye, epsilon_r, snr_target;
  double s_sample_asd;  // V m^-1/sqrt(Hz) at the evaluation frequency
  double eta, c_eff_value;
  double delta_e_max, delta_e_rms;  // V/m
  double s_tot;                     // V m^-1/sqrt(Hz)
  double snr_1s, tau_s, slowdown;
  bool gate;
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;
};

// One row per grid point, lexicographic in the axis order given. Throws
// std::invalid_argument when the grid exceeds `cap` points or an axis name is
// unknown.
SweepTable sweep(const FeasibilityScenario& scenario,
                 const std::vector<SweepAxis>& axes, long cap = 200000);

}  // namespace iongrad
