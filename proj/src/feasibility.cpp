#include "iongrad/feasibility.hpp"

#include <cmath>
#include <stdexcept>

#include "iongrad/constants.hpp"
#include "iongrad/errors.hpp"

namespace iongrad {

AveragingPlan AveragingPlan::make(double t_live, double t_dead, double f0) {
  if (!(t_live > 0.0)) throw std::domain_error("live time must be > 0");
  if (t_dead < 0.0) throw std::domain_error("dead time must be >= 0");
  if (!(f0 > 0.0)) throw std::domain_error("demodulation frequency must be > 0");
  return AveragingPlan{t_live, t_dead, f0};
}

ShotBudget shot_budget(const AveragingPlan& plan, double t_total) {
  if (!(t_total > 0.0)) throw std::domain_error("total time must be > 0");
  const double period = plan.t_live + plan.t_dead;
  const long shots = static_cast<long>(std::floor(t_total / period));
  return ShotBudget{shots, static_cast<double>(shots) * plan.t_live,
                    shots == 0};
}

ThroughputBudget ThroughputBudget::make(double t_setup, double t_align,
                                        double t_cal, int n_avg) {
  if (t_setup < 0.0 || t_align < 0.0 || t_cal < 0.0)
    throw std::domain_error("overhead times must be >= 0");
  if (n_avg < 1) throw std::domain_error("n_avg must be >= 1");
  return ThroughputBudget{t_setup, t_align, t_cal, n_avg};
}

double FeasibilityScenario::delta_ex_max() const {
  return delta_ex(geometry, dipole, interface);
}

double FeasibilityScenario::signal_rms() const {
  return rms_signal(delta_ex_max(), policy);
}

double FeasibilityScenario::noise_frequency() const {
  if (budget.mode == SensingMode::AC) return budget.sensor.f0;
  return dc_band_center > 0.0 ? dc_band_center : 1.0 / (2.0 * plan.t_live);
}

double FeasibilityScenario::total_noise_asd() const {
  return total_asd(budget, noise_frequency(), geometry.baseline);
}

SnrReport snr(const FeasibilityScenario& scenario, double t_total) {
  if (!(t_total > 0.0)) throw std::domain_error("total time must be > 0");
  const double signal = scenario.signal_rms();
  if (signal <= 0.0) return SnrReport{0.0, true};
  const double s_tot = scenario.total_noise_asd();
  return SnrReport{
      signal / s_tot * std::sqrt(scenario.plan.duty_cycle() * t_total), false};
}

double integration_time(const FeasibilityScenario& scenario) {
  const double signal = scenario.signal_rms();
  if (signal <= 0.0)
    throw InfeasibleError("scenario has zero signal; no finite integration time");
  const double ratio = scenario.snr_target * scenario.total_noise_asd() / signal;
  return ratio * ratio / scenario.plan.duty_cycle();
}

double baseline_leverage_tau(double tau, double d_from, double d_to) {
  if (!(d_from > 0.0) || !(d_to > 0.0))
    throw std::domain_error("baselines must be > 0");
  const double r = d_from / d_to;
  return tau * r * r;
}

double throughput(const FeasibilityScenario& scenario,
                  const ThroughputBudget& overheads) {
  const double tau = integration_time(scenario);
  const double t_site = overheads.t_setup + overheads.t_align +
                        overheads.t_cal +
                        static_cast<double>(overheads.n_avg) * tau;
  return 86400.0 / t_site;
}

std::vector<double> reference_signs(const std::vector<double>& times,
                                    const LockinReference& ref) {
  if (!(ref.f0 > 0.0)) throw std::domain_error("reference f0 must be > 0");
  std::vector<double> signs;
  signs.reserve(times.size());
  for (const double t : times) {
    const double phase = t * ref.f0;  // cycles
    const double frac = phase - std::floor(phase);
    double s = frac < 0.5 ? 1.0 : -1.0;
    if (ref.phase_cycling) {
      const auto cycle = static_cast<long long>(std::floor(phase));
      if (cycle & 1) s = -s;
    }
    signs.push_back(s);
  }
  return signs;
}

LockinResult lockin_demodulate(const std::vector<ShotSample>& stream,
                               const std::vector<double>& signs) {
  if (stream.size() != signs.size())
    throw std::invalid_argument("stream and reference lengths differ");
  if (stream.empty()) throw std::invalid_argument("empty shot stream");
  double acc = 0.0;
  for (std::size_t i = 0; i < stream.size(); ++i)
    acc += stream[i].value * signs[i];
  return LockinResult{acc / static_cast<double>(stream.size()),
                      static_cast<long>(stream.size())};
}

LockinResult lockin_demodulate(const std::vector<ShotSample>& stream,
                               const LockinReference& ref) {
  if (stream.size() < 2) throw std::invalid_argument("empty shot stream");
  const double span = stream.back().time - stream.front().time;
  if (span * ref.f0 < 2.0)
    throw std::invalid_argument(
        "shot stream shorter than two cycles of the reference");
  std::vector<double> times;
  times.reserve(stream.size());
  for (const auto& s : stream) times.push_back(s.time);
  return lockin_demodulate(stream, reference_signs(times, ref));
}

namespace {

FeasibilityScenario with_axis(const FeasibilityScenario& base,
                              const std::string& name, double value) {
  FeasibilityScenario s = base;
  if (name == "h_um") {
    s.geometry = GradiometerGeometry::make(value * 1e-6, s.geometry.baseline);
  } else if (name == "d_um") {
    s.geometry = GradiometerGeometry::make(s.geometry.height, value * 1e-6);
  } else if (name == "delta_p_debye") {
    s.dipole = DipoleMoment::from_debye(value, s.dipole.orientation);
  } else if (name == "epsilon_r") {
    s.interface = InterfaceModel::planar_dielectric(value);
  } else if (name == "s_sample") {
    s.budget.sample = SampleNoiseModel::flat_differential(value);
  } else if (name == "snr_target") {
    if (!(value > 0.0)) throw std::domain_error("snr_target must be > 0");
    s.snr_target = value;
  } else {
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
  }
  return s;
}

SweepRow evaluate_point(const FeasibilityScenario& s) {
  SweepRow row{};
  row.h_um = s.geometry.height * 1e6;
  row.d_um = s.geometry.baseline * 1e6;
  row.delta_p_debye = s.dipole.magnitude / constants::debye;
  row.epsilon_r = s.interface.epsilon_r;
  row.snr_target = s.snr_target;
  row.eta = s.interface.transmission();
  row.c_eff_value = c_eff(s.geometry.baseline / s.geometry.height);
  row.delta_e_max = s.delta_ex_max();
  row.delta_e_rms = s.signal_rms();
  const double f = s.noise_frequency();
  row.s_sample_asd = differential_asd(s.budget.sample, f, s.geometry.baseline);
  row.s_tot = s.total_noise_asd();
  row.snr_1s = snr(s, 1.0).value;
  row.tau_s = integration_time(s);
  row.slowdown = slowdown_factor(s.budget, f, s.geometry.baseline);
  row.gate = gate_pass(s.budget, f, s.geometry.baseline);
  return row;
}

void recurse(const FeasibilityScenario& base,
             const std::vector<SweepAxis>& axes, std::size_t level,
             SweepTable& table) {
  if (level == axes.size()) {
    table.rows.push_back(evaluate_point(base));
    return;
  }
  for (const double v : axes[level].values)
    recurse(with_axis(base, axes[level].name, v), axes, level + 1, table);
}

}  // namespace

SweepTable sweep(const FeasibilityScenario& scenario,
                 const std::vector<SweepAxis>& axes, long cap) {
  long points = 1;
  for (const auto& axis : axes) {
    if (axis.values.empty())
      throw std::invalid_argument("sweep axis '" + axis.name + "' is empty");
    points *= static_cast<long>(axis.values.size());
  }
  if (points > cap)
    throw std::invalid_argument("sweep grid has " + std::to_string(points) +
                                " points, exceeding the cap of " +
                                std::to_string(cap));
  SweepTable table;
  table.columns = {"h_um",
                   "d_um",
                   "delta_p_debye",
                   "epsilon_r",
                   "snr_target",
                   "eta",
                   "c_eff",
                   "delta_e_max_v_per_m",
                   "delta_e_rms_v_per_m",
                   "s_sample_v_per_m_sqrthz",
                   "s_tot_v_per_m_sqrthz",
                   "snr_1s",
                   "tau_s",
                   "slowdown",
                   "gate_pass"};
  recurse(scenario, axes, 0, table);
  return table;
}

}  // namespace iongrad
