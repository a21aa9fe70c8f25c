// Command-line front end: scenario-driven signal, feasibility, protocol
// simulation, noise analysis and parameter sweeps, with reproducible
// manifested outputs.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "iongrad/constants.hpp"
#include "iongrad/electrostatics.hpp"
#include "iongrad/errors.hpp"
#include "iongrad/feasibility.hpp"
#include "iongrad/noise_model.hpp"
#include "iongrad/protocol_sim.hpp"
#include "iongrad/rng.hpp"
#include "iongrad/scenario.hpp"
#include "iongrad/transduction.hpp"

namespace fs = std::filesystem;
using namespace iongrad;

namespace {

// Published feasibility estimates used for cross-check flags in reports.
constexpr double kRefDeltaEMaxVac = 5.7e-4;    // V/m
constexpr double kRefDeltaEMaxEps3 = 2.9e-4;   // V/m
constexpr double kRefSignalRms = 1.55e-4;      // V/m
constexpr double kRefSignalRms30um = 2.0e-6;   // V/m
constexpr double kRefTauAc = 38.0;             // s, SNR=1
constexpr double kRefTauDc = 162.0;            // s
constexpr double kRefTauAc30um = 63.0 * 3600;  // s
constexpr double kRefTauDc30um = 11.0 * 86400; // s
constexpr double kRefTauAcD10 = 4.5;           // s
constexpr double kRefTauDcD10 = 19.0;          // s
constexpr double kRefGateAc = 0.43e-3;         // V/m/sqrt(Hz)
constexpr double kRefGateDc = 0.88e-3;         // V/m/sqrt(Hz)

struct CommonOpts {
  std::string scenario_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string format = "table";
  std::uint64_t seed = 1;
};

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Scenario load_scenario(const CommonOpts& opts) {
  Scenario s = opts.scenario_path.empty()
                   ? baseline_scenario()
                   : parse_scenario_file(opts.scenario_path);
  for (const auto& kv : opts.overrides) apply_override(s, kv);
  return s;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--scenario", opts.scenario_path,
                  "scenario file (defaults to the built-in baseline)");
  cmd->add_option("--override", opts.overrides,
                  "KEY=VALUE scenario override (repeatable)");
  cmd->add_option("--out", opts.out_dir, "output directory for data files");
  cmd->add_option("--format", opts.format, "console format: table | csv")
      ->check(CLI::IsMember({"table", "csv"}));
  cmd->add_option("--seed", opts.seed, "random seed for stochastic commands");
}

class Report {
 public:
  void row(const std::string& name, double value, const std::string& note = "") {
    rows_.push_back({name, fmt_full(value), fmt3(value), note});
  }
  void text_row(const std::string& name, const std::string& value,
                const std::string& note = "") {
    rows_.push_back({name, value, value, note});
  }

  void print(const std::string& format) const {
    if (format == "csv") {
      std::printf("quantity,value,note\n");
      for (const auto& r : rows_)
        std::printf("%s,%s,%s\n", r.name.c_str(), r.full.c_str(),
                    r.note.c_str());
      return;
    }
    std::size_t w = 0;
    for (const auto& r : rows_) w = std::max(w, r.name.size());
    for (const auto& r : rows_) {
      std::printf("%-*s  %12s", static_cast<int>(w), r.name.c_str(),
                  r.pretty.c_str());
      if (!r.note.empty()) std::printf("  %s", r.note.c_str());
      std::printf("\n");
    }
  }

  void write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "quantity,value,note\n";
    for (const auto& r : rows_)
      out << r.name << "," << r.full << "," << r.note << "\n";
  }

 private:
  struct Row {
    std::string name, full, pretty, note;
  };
  std::vector<Row> rows_;
};

// Writes data files plus the manifest and the normalized scenario.
void finish_outputs(const CommonOpts& opts, const Scenario& scenario,
                    std::vector<std::string> outputs) {
  if (opts.out_dir.empty()) return;
  const fs::path dir(opts.out_dir);
  std::ofstream norm(dir / "scenario.normalized");
  norm << scenario.normalized();
  outputs.push_back("scenario.normalized");
  write_manifest((dir / "manifest.txt").string(),
                 make_manifest(scenario, opts.seed, std::move(outputs)));
}

std::string check_note(double value, double reference, double tol) {
  const double dev = (value - reference) / reference;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s vs reference %.3g (dev %+.1f%%, tol %.0f%%)",
                std::abs(dev) <= tol ? "PASS" : "FAIL", reference, 100.0 * dev,
                100.0 * tol);
  return buf;
}

// ---- field ----------------------------------------------------------------

int cmd_field(const CommonOpts& opts) {
  const Scenario scenario = load_scenario(opts);
  const FeasibilityScenario f = scenario.feasibility();

  const double u = f.geometry.baseline / f.geometry.height;
  const double vac = delta_ex(f.geometry, f.dipole, InterfaceModel::vacuum());
  const double with_eta = f.delta_ex_max();
  const double rms = f.signal_rms();

  Report report;
  report.row("h_um", f.geometry.height * 1e6);
  report.row("d_um", f.geometry.baseline * 1e6);
  report.row("delta_p_debye", f.dipole.magnitude / constants::debye);
  report.text_row("interface", to_string(f.interface.kind));
  report.row("eta", f.interface.transmission());
  report.row("c_eff", c_eff(u));
  // reference flags only apply at the operating points the references assume
  const bool baseline_point = scenario.h_um == 10.0 &&
                              std::abs(scenario.delta_p_debye - 20.0) < 1e-12 &&
                              f.geometry.baseline < 4e-6;
  const bool far_point = scenario.h_um == 30.0 &&
                         std::abs(scenario.delta_p_debye - 20.0) < 1e-12 &&
                         f.geometry.baseline < 4e-6;
  report.row("delta_e_max_vacuum_v_per_m", vac,
             baseline_point ? check_note(vac, kRefDeltaEMaxVac, 0.02) : "");
  report.row("delta_e_max_v_per_m", with_eta,
             baseline_point &&
                     f.interface.kind == InterfaceKind::planar_dielectric
                 ? check_note(with_eta, kRefDeltaEMaxEps3, 0.02)
                 : "");
  report.text_row("orientation_policy", to_string(f.policy));
  std::string rms_note;
  if (f.policy == OrientationPolicy::isotropic_rms &&
      f.interface.kind == InterfaceKind::planar_dielectric) {
    if (baseline_point)
      rms_note = check_note(rms, kRefSignalRms, 0.15);
    else if (far_point)
      rms_note = check_note(rms, kRefSignalRms30um, 0.20);
  }
  report.row("delta_e_rms_v_per_m", rms, rms_note);

  report.print(opts.format);
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    report.write_csv((fs::path(opts.out_dir) / "field.csv").string());
    finish_outputs(opts, scenario, {"field.csv"});
  }
  return 0;
}

// ---- feasibility -----------------------------------------------------------

int cmd_feasibility(const CommonOpts& opts) {
  const Scenario scenario = load_scenario(opts);
  FeasibilityScenario base = scenario.feasibility();
  base.snr_target = 1.0;

  FeasibilityScenario ac = base;
  ac.budget.mode = SensingMode::AC;
  FeasibilityScenario dc = base;
  dc.budget.mode = SensingMode::DC;

  const double tau_ac = integration_time(ac);
  const double tau_dc = integration_time(dc);
  const double d_base = base.geometry.baseline;

  Report report;
  report.row("snr_ac_1s", snr(ac, 1.0).value, check_note(snr(ac, 1.0).value, 0.16, 0.15));
  report.row("snr_dc_1s", snr(dc, 1.0).value, check_note(snr(dc, 1.0).value, 0.08, 0.15));
  report.row("tau_ac_snr1_s", tau_ac, check_note(tau_ac, kRefTauAc, 0.15));
  report.row("tau_dc_snr1_s", tau_dc, check_note(tau_dc, kRefTauDc, 0.15));
  report.row("tau_ac_snr10_s", 100.0 * tau_ac,
             check_note(100.0 * tau_ac, 100.0 * kRefTauAc, 0.15));
  report.row("tau_dc_snr10_s", 100.0 * tau_dc,
             check_note(100.0 * tau_dc, 100.0 * kRefTauDc, 0.15));
  report.row("tau_ac_d10um_s", baseline_leverage_tau(tau_ac, d_base, 10e-6),
             check_note(baseline_leverage_tau(tau_ac, d_base, 10e-6),
                        kRefTauAcD10, 0.15));
  report.row("tau_dc_d10um_s", baseline_leverage_tau(tau_dc, d_base, 10e-6),
             check_note(baseline_leverage_tau(tau_dc, d_base, 10e-6),
                        kRefTauDcD10, 0.15));

  FeasibilityScenario ac30 = ac;
  ac30.geometry = GradiometerGeometry::make(30e-6, d_base);
  FeasibilityScenario dc30 = dc;
  dc30.geometry = ac30.geometry;
  report.row("tau_ac_h30um_s", integration_time(ac30),
             check_note(integration_time(ac30), kRefTauAc30um, 0.20));
  report.row("tau_dc_h30um_s", integration_time(dc30),
             check_note(integration_time(dc30), kRefTauDc30um, 0.20));

  const double gate_ac = kGateRatio * base.budget.sensor.s_ac;
  const double gate_dc = kGateRatio * base.budget.sensor.s_dc;
  report.row("gate_ac_v_per_m_sqrthz", gate_ac,
             check_note(gate_ac, kRefGateAc, 0.01));
  report.row("gate_dc_v_per_m_sqrthz", gate_dc,
             check_note(gate_dc, kRefGateDc, 0.01));
  report.row("slowdown_at_gate", kGateSlowdown, "exact 1.2025 by definition");

  // throughput under the scenario overheads; the published 1-3 and 4-8
  // sites/day do not follow from 86400/T_site with these same inputs, so the
  // computed values are reported without a pass flag.
  FeasibilityScenario snr10 = ac;
  snr10.snr_target = 10.0;
  const auto overheads =
      ThroughputBudget::make(scenario.t_setup_s, scenario.t_align_s,
                             scenario.t_cal_s, scenario.n_avg);
  report.row("sites_per_day_snr10", throughput(snr10, overheads),
             "computed from 86400/T_site");

  report.print(opts.format);
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    report.write_csv((fs::path(opts.out_dir) / "feasibility.csv").string());
    finish_outputs(opts, scenario, {"feasibility.csv"});
  }
  return 0;
}

// ---- simulate ---------------------------------------------------------------

int cmd_simulate(const CommonOpts& opts, int shots, double bias,
                 std::optional<double> field_override) {
  const Scenario scenario = load_scenario(opts);
  const FeasibilityScenario f = scenario.feasibility();
  const TwoIonCrystal crystal = f.crystal;
  const SdfSequence seq = scenario.sdf_sequence();

  const double field = field_override.value_or(f.signal_rms());
  const double phi_analytic = phase_from_field(gain(seq, crystal), field);

  const auto evolved = evolve_sdf_converged(prepare_bell(ProtocolState::ground()),
                                            seq, crystal, field);
  const double phi_sim = relative_phase(evolved.state);
  const double gain_dev =
      phi_analytic != 0.0 ? phi_sim / phi_analytic - 1.0 : 0.0;

  const auto shot_list = sample_shots(evolved.state, shots, opts.seed, bias);
  long bright = 0;
  for (const auto& s : shot_list) bright += s.bright;

  Report report;
  report.row("delta_e_v_per_m", field);
  report.row("phi_analytic_rad", phi_analytic);
  report.row("phi_simulated_rad", phi_sim);
  report.row("gain_deviation", gain_dev,
             std::abs(gain_dev) < 0.01 ? "PASS within 1% of the analytic gain"
                                       : "FAIL vs analytic gain (1%)");
  report.row("integrator_steps", static_cast<double>(evolved.steps));
  report.row("p_bright", shot_list.front().p_bright);
  report.row("bias_rad", bias);
  report.row("shots", static_cast<double>(shots));
  report.row("bright_count", static_cast<double>(bright));
  report.row("seed", static_cast<double>(opts.seed));
  try {
    const auto est = estimate_phase(shot_list);
    report.row("phi_hat_rad", est.phi_hat,
               "fringe inversion including the analysis bias");
    report.row("phi_hat_minus_bias_rad", est.phi_hat - bias);
    report.row("std_error_rad", est.std_error);
  } catch (const UnidentifiablePhaseError&) {
    report.text_row("phi_hat_rad", "degenerate",
                    "all-bright or all-dark sample");
  }

  report.print(opts.format);
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    report.write_csv((fs::path(opts.out_dir) / "simulate.csv").string());
    finish_outputs(opts, scenario, {"simulate.csv"});
  }
  return 0;
}

// ---- noise ------------------------------------------------------------------

std::vector<double> scenario_series(const Scenario& scenario,
                                    const FeasibilityScenario& f,
                                    std::uint64_t seed) {
  return synthesize_timeseries(f.budget.sample, f.geometry.baseline,
                               scenario.synth_duration_s,
                               scenario.synth_rate_hz, seed);
}

int cmd_noise_psd(const CommonOpts& opts, const std::string& input) {
  const Scenario scenario = load_scenario(opts);
  const FeasibilityScenario f = scenario.feasibility();

  std::vector<double> series;
  double rate = scenario.synth_rate_hz;
  if (input.empty()) {
    series = scenario_series(scenario, f, opts.seed);
  } else {
    const TimeSeries ts = read_timeseries(input);
    series = ts.value;
    rate = ts.sample_rate;
  }
  int segment = 4096;
  while (segment > static_cast<int>(series.size()) / 4) segment /= 2;
  const PsdEstimate est = psd_welch(series, rate, segment);

  const double d = f.geometry.baseline;
  const double f_eval = f.noise_frequency();
  Report report;
  const double corr = f.budget.sample.spatial_correlation(d);
  report.row("spatial_correlation", corr);
  report.row("diff_to_single_point_asd_ratio", std::sqrt(2.0 * (1.0 - corr)),
             corr == 0.0 ? "sqrt(2) in the uncorrelated limit" : "");
  report.row("s_sample_v_per_m_sqrthz", differential_asd(f.budget.sample, f_eval, d));
  report.row("s_tot_v_per_m_sqrthz", f.total_noise_asd());
  report.row("slowdown", slowdown_factor(f.budget, f_eval, d));
  report.text_row("gate_pass", gate_pass(f.budget, f_eval, d) ? "yes" : "no");
  if (f.budget.sample.amplitude > 0.0) {
    const double f_lo = est.frequency.front() * 4.0;
    const double f_hi = est.frequency.back() / 4.0;
    const double slope = fit_loglog_slope(est, f_lo, f_hi);
    report.row("fitted_psd_slope", slope);
    report.row("target_psd_slope", -f.budget.sample.alpha);
  }
  report.print(opts.format);

  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / "psd.csv";
    std::ofstream out(path);
    out << "frequency_hz,psd_measured,psd_model\n";
    for (std::size_t i = 0; i < est.frequency.size(); ++i)
      out << fmt_full(est.frequency[i]) << "," << fmt_full(est.psd[i]) << ","
          << fmt_full(differential_psd(f.budget.sample, est.frequency[i], d))
          << "\n";
    finish_outputs(opts, scenario, {"psd.csv"});
  }
  return 0;
}

int cmd_noise_synth(const CommonOpts& opts) {
  const Scenario scenario = load_scenario(opts);
  const FeasibilityScenario f = scenario.feasibility();
  const auto series = scenario_series(scenario, f, opts.seed);

  Report report;
  report.row("samples", static_cast<double>(series.size()));
  report.row("sample_rate_hz", scenario.synth_rate_hz);
  report.row("duration_s", scenario.synth_duration_s);
  report.print(opts.format);

  if (opts.out_dir.empty())
    throw std::runtime_error("noise synth needs --out to store the series");
  fs::create_directories(opts.out_dir);
  write_timeseries((fs::path(opts.out_dir) / "timeseries.csv").string(), series,
                   scenario.synth_rate_hz);
  finish_outputs(opts, scenario, {"timeseries.csv"});
  return 0;
}

int cmd_noise_allan(const CommonOpts& opts, const std::string& input) {
  const Scenario scenario = load_scenario(opts);
  const FeasibilityScenario f = scenario.feasibility();

  std::vector<double> series;
  double rate = scenario.synth_rate_hz;
  if (input.empty()) {
    series = scenario_series(scenario, f, opts.seed);
  } else {
    const TimeSeries ts = read_timeseries(input);
    series = ts.value;
    rate = ts.sample_rate;
  }
  const double duration = static_cast<double>(series.size()) / rate;
  std::vector<double> taus;
  for (double tau = 2.0 / rate; tau <= duration / 4.0; tau *= 2.0)
    taus.push_back(tau);
  const auto adev = allan_deviation(series, rate, taus);

  Report report;
  report.row("taus", static_cast<double>(taus.size()));
  report.row("adev_first", adev.front());
  report.row("adev_last", adev.back());
  report.print(opts.format);

  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / "allan.csv";
    std::ofstream out(path);
    out << "tau_s,allan_deviation\n";
    for (std::size_t i = 0; i < taus.size(); ++i)
      out << fmt_full(taus[i]) << "," << fmt_full(adev[i]) << "\n";
    finish_outputs(opts, scenario, {"allan.csv"});
  }
  return 0;
}

int cmd_noise_demod(const CommonOpts& opts) {
  const Scenario scenario = load_scenario(opts);
  const FeasibilityScenario f = scenario.feasibility();

  const double rate = scenario.synth_rate_hz;
  const double amp = f.signal_rms();
  const auto noise = scenario_series(scenario, f, opts.seed);

  const LockinReference ref{f.plan.f0, true};
  std::vector<ShotSample> stream(noise.size());
  std::vector<double> times(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i)
    times[i] = (static_cast<double>(i) + 0.5) / rate;
  const auto signs = reference_signs(times, ref);
  for (std::size_t i = 0; i < noise.size(); ++i) {
    // tone locked to the cycled reference, plus the sample noise
    stream[i] = ShotSample{times[i], amp * signs[i] + noise[i]};
  }
  const auto result = lockin_demodulate(stream, signs);

  const double t_total = static_cast<double>(noise.size()) / rate;
  Report report;
  report.row("tone_v_per_m", amp);
  report.row("estimate_v_per_m", result.estimate);
  report.row("expected_v_per_m", amp, "square-lock of a locked tone");
  report.row("samples", static_cast<double>(result.used));
  report.row("predicted_snr", snr(f, t_total).value);
  report.print(opts.format);

  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    report.write_csv((fs::path(opts.out_dir) / "demod.csv").string());
    finish_outputs(opts, scenario, {"demod.csv"});
  }
  return 0;
}

// ---- sweep ------------------------------------------------------------------

std::vector<SweepAxis> parse_axes(const std::vector<std::string>& specs) {
  std::vector<SweepAxis> axes;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("axis must be NAME=v1,v2,... or NAME=a:b:n");
    SweepAxis axis;
    axis.name = spec.substr(0, eq);
    const std::string body = spec.substr(eq + 1);
    if (body.find(':') != std::string::npos) {
      double a = 0, b = 0;
      long n = 0;
      if (std::sscanf(body.c_str(), "%lf:%lf:%ld", &a, &b, &n) != 3 || n < 1)
        throw std::invalid_argument("bad axis range '" + spec + "'");
      for (long i = 0; i < n; ++i)
        axis.values.push_back(
            n == 1 ? a : a + (b - a) * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
    } else {
      std::size_t start = 0;
      while (start <= body.size()) {
        const auto comma = body.find(',', start);
        const std::string tok =
            body.substr(start, comma == std::string::npos ? std::string::npos
                                                          : comma - start);
        if (tok.empty()) throw std::invalid_argument("bad axis '" + spec + "'");
        axis.values.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& axis_specs,
              long cap) {
  const Scenario scenario = load_scenario(opts);
  const auto axes = parse_axes(axis_specs);
  const SweepTable table = sweep(scenario.feasibility(), axes, cap);

  if (opts.format == "csv" || opts.out_dir.empty()) {
    std::string header;
    for (const auto& c : table.columns)
      header += (header.empty() ? "" : ",") + c;
    std::printf("%s\n", header.c_str());
    for (const auto& r : table.rows)
      std::printf("%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%d\n",
                  fmt3(r.h_um).c_str(), fmt3(r.d_um).c_str(),
                  fmt3(r.delta_p_debye).c_str(), fmt3(r.epsilon_r).c_str(),
                  fmt3(r.snr_target).c_str(), fmt3(r.eta).c_str(),
                  fmt3(r.c_eff_value).c_str(), fmt3(r.delta_e_max).c_str(),
                  fmt3(r.delta_e_rms).c_str(), fmt3(r.s_sample_asd).c_str(),
                  fmt3(r.s_tot).c_str(), fmt3(r.snr_1s).c_str(),
                  fmt3(r.tau_s).c_str(), fmt3(r.slowdown).c_str(),
                  r.gate ? 1 : 0);
  } else {
    std::printf("sweep: %zu rows\n", table.rows.size());
  }

  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / "sweep.csv";
    std::ofstream out(path);
    std::string header;
    for (const auto& c : table.columns)
      header += (header.empty() ? "" : ",") + c;
    out << header << "\n";
    for (const auto& r : table.rows)
      out << fmt_full(r.h_um) << "," << fmt_full(r.d_um) << ","
          << fmt_full(r.delta_p_debye) << "," << fmt_full(r.epsilon_r) << ","
          << fmt_full(r.snr_target) << "," << fmt_full(r.eta) << ","
          << fmt_full(r.c_eff_value) << "," << fmt_full(r.delta_e_max) << ","
          << fmt_full(r.delta_e_rms) << "," << fmt_full(r.s_sample_asd) << ","
          << fmt_full(r.s_tot) << "," << fmt_full(r.snr_1s) << ","
          << fmt_full(r.tau_s) << "," << fmt_full(r.slowdown) << ","
          << (r.gate ? 1 : 0) << "\n";
    finish_outputs(opts, scenario, {"sweep.csv"});
  }
  return 0;
}

int classify_error(const std::exception& err) {
  if (dynamic_cast<const ParseError*>(&err)) {
    std::fprintf(stderr, "error: parse_error: %s\n", err.what());
    return 3;
  }
  if (dynamic_cast<const InfeasibleError*>(&err)) {
    std::fprintf(stderr, "error: infeasible: %s\n", err.what());
    return 5;
  }
  if (dynamic_cast<const TruncationError*>(&err)) {
    std::fprintf(stderr, "error: truncation: %s\n", err.what());
    return 6;
  }
  if (dynamic_cast<const std::domain_error*>(&err) ||
      dynamic_cast<const std::invalid_argument*>(&err)) {
    std::fprintf(stderr, "error: domain_error: %s\n", err.what());
    return 4;
  }
  std::fprintf(stderr, "error: runtime_error: %s\n", err.what());
  return 7;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-ion field-gradiometer feasibility simulator"};
  app.require_subcommand(1);

  CommonOpts field_opts;
  auto* field_cmd = app.add_subcommand("field", "differential-field signal report");
  add_common(field_cmd, field_opts);

  CommonOpts feas_opts;
  auto* feas_cmd =
      app.add_subcommand("feasibility", "integration times, gates, throughput");
  add_common(feas_cmd, feas_opts);

  CommonOpts sim_opts;
  int sim_shots = 1000;
  double sim_bias = constants::pi / 2.0;
  std::optional<double> sim_field;
  auto* sim_cmd =
      app.add_subcommand("simulate", "shot-level protocol Monte Carlo");
  add_common(sim_cmd, sim_opts);
  sim_cmd->add_option("--shots", sim_shots, "number of shots")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--bias-rad", sim_bias, "analysis phase bias");
  sim_cmd->add_option("--field", sim_field,
                      "override the differential field (V/m)");

  auto* noise_cmd = app.add_subcommand("noise", "noise analyses");
  noise_cmd->require_subcommand(1);
  CommonOpts psd_opts, synth_opts, allan_opts, demod_opts;
  std::string psd_input, allan_input;
  auto* psd_cmd = noise_cmd->add_subcommand("psd", "Welch PSD vs the model");
  add_common(psd_cmd, psd_opts);
  psd_cmd->add_option("--input", psd_input, "time-series CSV to analyze");
  auto* synth_cmd =
      noise_cmd->add_subcommand("synth", "synthesize a sample-noise series");
  add_common(synth_cmd, synth_opts);
  auto* allan_cmd = noise_cmd->add_subcommand("allan", "Allan deviation");
  add_common(allan_cmd, allan_opts);
  allan_cmd->add_option("--input", allan_input, "time-series CSV to analyze");
  auto* demod_cmd =
      noise_cmd->add_subcommand("demod", "lock-in demodulation demo");
  add_common(demod_cmd, demod_opts);

  CommonOpts sweep_opts;
  std::vector<std::string> axis_specs;
  long sweep_cap = 200000;
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter-grid sweep");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", axis_specs,
                        "NAME=v1,v2,... or NAME=start:stop:count (repeatable)")
      ->required();
  sweep_cmd->add_option("--cap", sweep_cap, "maximum grid points");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*field_cmd) return cmd_field(field_opts);
    if (*feas_cmd) return cmd_feasibility(feas_opts);
    if (*sim_cmd) return cmd_simulate(sim_opts, sim_shots, sim_bias, sim_field);
    if (*psd_cmd) return cmd_noise_psd(psd_opts, psd_input);
    if (*synth_cmd) return cmd_noise_synth(synth_opts);
    if (*allan_cmd) return cmd_noise_allan(allan_opts, allan_input);
    if (*demod_cmd) return cmd_noise_demod(demod_opts);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, axis_specs, sweep_cap);
  } catch (const std::exception& err) {
    return classify_error(err);
  }
  return 2;
}
