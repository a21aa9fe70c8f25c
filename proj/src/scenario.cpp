#include "iongrad/scenario.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "iongrad/constants.hpp"

namespace iongrad {

namespace {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_number(const std::string& value, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ParseError(where + ": not a number: '" + value + "'");
  return v;
}

int parse_int(const std::string& value, const std::string& where) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ParseError(where + ": not an integer: '" + value + "'");
  return static_cast<int>(v);
}

void check_choice(const std::string& value,
                  std::initializer_list<const char*> choices,
                  const std::string& where) {
  for (const char* c : choices)
    if (value == c) return;
  std::string allowed;
  for (const char* c : choices) {
    if (!allowed.empty()) allowed += " | ";
    allowed += c;
  }
  throw ParseError(where + ": expected one of {" + allowed + "}, got '" +
                   value + "'");
}

// One dispatch shared by the file parser and --override.
void set_key(Scenario& s, const std::string& key, const std::string& value,
             const std::string& where) {
  const auto num = [&] { return parse_number(value, where); };
  const auto integer = [&] { return parse_int(value, where); };

  if (key == "h_um") s.h_um = num();
  else if (key == "d_um") s.d_um = num();
  else if (key == "delta_p_debye") s.delta_p_debye = num();
  else if (key == "orientation_policy") {
    check_choice(value, {"fixed-normal", "isotropic-rms"}, where);
    s.orientation_policy = value;
  } else if (key == "interface") {
    check_choice(value, {"vacuum", "planar-dielectric", "metal-underlayer"},
                 where);
    s.interface = value;
  } else if (key == "epsilon_r") s.epsilon_r = num();
  else if (key == "ion_mass_u") s.ion_mass_u = num();
  else if (key == "ion_charge") s.ion_charge = integer();
  else if (key == "omega_x_hz") s.omega_x_hz = num();
  else if (key == "sdf_g_hz") s.sdf_g_hz = num();
  else if (key == "sdf_delta_hz") s.sdf_delta_hz = num();
  else if (key == "sdf_loops") s.sdf_loops = integer();
  else if (key == "sdf_nbar") s.sdf_nbar = num();
  else if (key == "s_ac_v_per_m_sqrthz") s.s_ac_v_per_m_sqrthz = num();
  else if (key == "s_dc_v_per_m_sqrthz") s.s_dc_v_per_m_sqrthz = num();
  else if (key == "f0_hz") s.f0_hz = num();
  else if (key == "mode") {
    check_choice(value, {"AC", "DC"}, where);
    s.mode = value;
  } else if (key == "dc_band_center_hz") s.dc_band_center_hz = num();
  else if (key == "sample_amp_v2_per_m2_at_1hz")
    s.sample_amp_v2_per_m2_at_1hz = num();
  else if (key == "sample_alpha") s.sample_alpha = num();
  else if (key == "sample_corr_length_um") s.sample_corr_length_um = num();
  else if (key == "sample_corr_shape") {
    check_choice(value, {"exponential", "gaussian", "none"}, where);
    s.sample_corr_shape = value;
  } else if (key == "t_live_ms") s.t_live_ms = num();
  else if (key == "t_dead_ms") s.t_dead_ms = num();
  else if (key == "snr_target") s.snr_target = num();
  else if (key == "t_setup_s") s.t_setup_s = num();
  else if (key == "t_align_s") s.t_align_s = num();
  else if (key == "t_cal_s") s.t_cal_s = num();
  else if (key == "n_avg") s.n_avg = integer();
  else if (key == "synth_duration_s") s.synth_duration_s = num();
  else if (key == "synth_rate_hz") s.synth_rate_hz = num();
  else
    throw ParseError(where + ": unknown key '" + key + "'");
}

}  // namespace

TwoIonCrystal Scenario::crystal() const {
  return TwoIonCrystal::make(IonSpecies::from_amu(ion_mass_u, ion_charge),
                             constants::two_pi * omega_x_hz);
}

double Scenario::baseline_m() const {
  if (d_um) return *d_um * 1e-6;
  return crystal().separation;
}

SdfSequence Scenario::sdf_sequence() const {
  return SdfSequence::closed(constants::two_pi * sdf_g_hz,
                             constants::two_pi * sdf_delta_hz, sdf_loops,
                             sdf_nbar);
}

FeasibilityScenario Scenario::feasibility() const {
  FeasibilityScenario f;
  f.geometry = GradiometerGeometry::make(h_um * 1e-6, baseline_m());
  f.dipole = DipoleMoment::from_debye(delta_p_debye, Vec3{0.0, 0.0, 1.0});
  if (interface == "vacuum") f.interface = InterfaceModel::vacuum();
  else if (interface == "planar-dielectric")
    f.interface = InterfaceModel::planar_dielectric(epsilon_r);
  else f.interface = InterfaceModel::metal_underlayer();
  f.crystal = crystal();

  CorrelationShape shape = CorrelationShape::none;
  if (sample_corr_shape == "exponential") shape = CorrelationShape::exponential;
  else if (sample_corr_shape == "gaussian") shape = CorrelationShape::gaussian;
  f.budget.sensor = SensorSensitivity::make(s_dc_v_per_m_sqrthz,
                                            s_ac_v_per_m_sqrthz, f0_hz);
  f.budget.sample = SampleNoiseModel::make(
      sample_amp_v2_per_m2_at_1hz, sample_alpha, sample_corr_length_um * 1e-6,
      shape);
  f.budget.mode = mode == "AC" ? SensingMode::AC : SensingMode::DC;

  f.plan = AveragingPlan::make(t_live_ms * 1e-3, t_dead_ms * 1e-3, f0_hz);
  f.policy = orientation_policy == "fixed-normal"
                 ? OrientationPolicy::fixed_normal
                 : OrientationPolicy::isotropic_rms;
  if (!(snr_target > 0.0)) throw std::domain_error("snr_target must be > 0");
  f.snr_target = snr_target;
  f.dc_band_center = dc_band_center_hz.value_or(0.0);
  return f;
}

std::string Scenario::normalized() const {
  std::ostringstream out;
  out << "# iongrad scenario (normalized)\n";
  out << "h_um = " << fmt_full(h_um) << "\n";
  if (d_um) out << "d_um = " << fmt_full(*d_um) << "\n";
  out << "delta_p_debye = " << fmt_full(delta_p_debye) << "\n";
  out << "orientation_policy = " << orientation_policy << "\n";
  out << "interface = " << interface << "\n";
  out << "epsilon_r = " << fmt_full(epsilon_r) << "\n";
  out << "ion_mass_u = " << fmt_full(ion_mass_u) << "\n";
  out << "ion_charge = " << ion_charge << "\n";
  out << "omega_x_hz = " << fmt_full(omega_x_hz) << "\n";
  out << "sdf_g_hz = " << fmt_full(sdf_g_hz) << "\n";
  out << "sdf_delta_hz = " << fmt_full(sdf_delta_hz) << "\n";
  out << "sdf_loops = " << sdf_loops << "\n";
  out << "sdf_nbar = " << fmt_full(sdf_nbar) << "\n";
  out << "s_ac_v_per_m_sqrthz = " << fmt_full(s_ac_v_per_m_sqrthz) << "\n";
  out << "s_dc_v_per_m_sqrthz = " << fmt_full(s_dc_v_per_m_sqrthz) << "\n";
  out << "f0_hz = " << fmt_full(f0_hz) << "\n";
  out << "mode = " << mode << "\n";
  if (dc_band_center_hz)
    out << "dc_band_center_hz = " << fmt_full(*dc_band_center_hz) << "\n";
  out << "sample_amp_v2_per_m2_at_1hz = " << fmt_full(sample_amp_v2_per_m2_at_1hz)
      << "\n";
  out << "sample_alpha = " << fmt_full(sample_alpha) << "\n";
  out << "sample_corr_length_um = " << fmt_full(sample_corr_length_um) << "\n";
  out << "sample_corr_shape = " << sample_corr_shape << "\n";
  out << "t_live_ms = " << fmt_full(t_live_ms) << "\n";
  out << "t_dead_ms = " << fmt_full(t_dead_ms) << "\n";
  out << "snr_target = " << fmt_full(snr_target) << "\n";
  out << "t_setup_s = " << fmt_full(t_setup_s) << "\n";
  out << "t_align_s = " << fmt_full(t_align_s) << "\n";
  out << "t_cal_s = " << fmt_full(t_cal_s) << "\n";
  out << "n_avg = " << n_avg << "\n";
  out << "synth_duration_s = " << fmt_full(synth_duration_s) << "\n";
  out << "synth_rate_hz = " << fmt_full(synth_rate_hz) << "\n";
  return out.str();
}

Scenario baseline_scenario() { return Scenario{}; }

Scenario parse_scenario_text(const std::string& text,
                             const std::string& origin) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int keys = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(where + ": expected 'key = value'");
    set_key(s, key, value, where);
    ++keys;
  }
  if (keys == 0) throw ParseError(origin + ": empty scenario");
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

void apply_override(Scenario& scenario, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= key_value.size())
    throw ParseError("override must be KEY=VALUE, got '" + key_value + "'");
  set_key(scenario, trim(key_value.substr(0, eq)),
          trim(key_value.substr(eq + 1)), "--override " + key_value);
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string doc = scenario.normalized();
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : doc) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunManifest make_manifest(const Scenario& scenario, std::uint64_t seed,
                          std::vector<std::string> outputs) {
  RunManifest m;
  m.tool_version = kToolVersion;
  m.scenario_hash = scenario_hash(scenario);
  m.seed = seed;
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  m.timestamp_utc = stamp;
  m.outputs = std::move(outputs);
  return m;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "tool_version = " << manifest.tool_version << "\n";
  out << "scenario_hash = " << manifest.scenario_hash << "\n";
  out << "seed = " << manifest.seed << "\n";
  out << "timestamp_utc = " << manifest.timestamp_utc << "\n";
  std::string files;
  for (const auto& f : manifest.outputs) {
    if (!files.empty()) files += ",";
    files += f;
  }
  out << "outputs = " << files << "\n";
}

}  // namespace iongrad
