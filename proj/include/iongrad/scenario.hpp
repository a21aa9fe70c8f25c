#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iongrad/feasibility.hpp"
#include "iongrad/transduction.hpp"

namespace iongrad {

// Scenario parse failure with file/line context.
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key-value scenario document. Every numeric key carries its unit in the
// name; unknown keys are rejected, missing keys fall back to the documented
// defaults. d_um and dc_band_center_hz stay optional: absent means derived
// (equilibrium separation, 1/(2 T_live)).
struct Scenario {
  // geometry & source
  double h_um = 10.0;
  std::optional<double> d_um;
  double delta_p_debye = 20.0;
  std::string orientation_policy = "isotropic-rms";
  std::string interface = "planar-dielectric";
  double epsilon_r = 3.0;
  // crystal
  double ion_mass_u = 170.936330;
  int ion_charge = 1;
  double omega_x_hz = 1.0e6;  // axial trap frequency (cycles/s)
  // SDF sequence
  double sdf_g_hz = 5.0e3;      // g / 2 pi
  double sdf_delta_hz = 5.0e4;  // delta / 2 pi
  int sdf_loops = 4;
  double sdf_nbar = 0.0;
  // sensor noise
  double s_ac_v_per_m_sqrthz = 0.96e-3;
  double s_dc_v_per_m_sqrthz = 1.97e-3;
  double f0_hz = 5.8;
  std::string mode = "AC";
  std::optional<double> dc_band_center_hz;
  // sample noise
  double sample_amp_v2_per_m2_at_1hz = 0.0;
  double sample_alpha = 1.0;
  double sample_corr_length_um = 100.0;
  std::string sample_corr_shape = "exponential";
  // averaging plan
  double t_live_ms = 172.0;
  double t_dead_ms = 0.0;
  double snr_target = 1.0;
  // throughput overheads
  double t_setup_s = 1800.0;
  double t_align_s = 900.0;
  double t_cal_s = 900.0;
  int n_avg = 1;
  // synthesis defaults for the noise subcommands
  double synth_duration_s = 64.0;
  double synth_rate_hz = 256.0;

  // Typed views. Derived quantities are resolved here.
  TwoIonCrystal crystal() const;
  FeasibilityScenario feasibility() const;
  SdfSequence sdf_sequence() const;  // closed loops at the scenario detuning
  double baseline_m() const;         // d_um or the derived separation

  // Canonical full-precision document; parse(normalized()) == *this.
  std::string normalized() const;
};

// The bundled defaults (a default-constructed Scenario).
Scenario baseline_scenario();

// Parses a scenario document; `origin` labels diagnostics.
Scenario parse_scenario_text(const std::string& text,
                             const std::string& origin = "<string>");
Scenario parse_scenario_file(const std::string& path);

// Applies KEY=VALUE overrides with the same validation as the parser.
void apply_override(Scenario& scenario, const std::string& key_value);

// FNV-1a 64 of the normalized document, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

// Flat key=value run manifest. The timestamp is the only field allowed to
// differ between identical runs.
struct RunManifest {
  std::string tool_version;
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::string timestamp_utc;
  std::vector<std::string> outputs;
};

RunManifest make_manifest(const Scenario& scenario, std::uint64_t seed,
                          std::vector<std::string> outputs);
void write_manifest(const std::string& path, const RunManifest& manifest);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace iongrad
