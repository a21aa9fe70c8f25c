#include "iongrad/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "iongrad/constants.hpp"
#include "iongrad/errors.hpp"
#include "iongrad/rng.hpp"

namespace iongrad {

using cplx = std::complex<double>;

SensorSensitivity SensorSensitivity::make(double s_dc, double s_ac, double f0) {
  if (!(s_dc > 0.0) || !(s_ac > 0.0) || !(f0 > 0.0))
    throw std::domain_error("sensor sensitivities and f0 must be > 0");
  return SensorSensitivity{s_dc, s_ac, f0};
}

SampleNoiseModel SampleNoiseModel::make(double amplitude, double alpha,
                                        double corr_length,
                                        CorrelationShape shape) {
  if (amplitude < 0.0) throw std::domain_error("noise amplitude must be >= 0");
  if (alpha < 0.0 || alpha > 3.0)
    throw std::domain_error("spectral exponent must be in [0, 3]");
  if (shape != CorrelationShape::none && !(corr_length > 0.0))
    throw std::domain_error("correlation length must be > 0");
  return SampleNoiseModel{amplitude, alpha, corr_length, shape};
}

SampleNoiseModel SampleNoiseModel::flat_differential(double asd) {
  if (asd < 0.0) throw std::domain_error("ASD must be >= 0");
  return SampleNoiseModel{0.5 * asd * asd, 0.0, 1e-4, CorrelationShape::none};
}

double SampleNoiseModel::single_point_psd(double f) const {
  if (!(f > 0.0)) throw std::domain_error("frequency must be > 0");
  return amplitude / std::pow(f, alpha);
}

double SampleNoiseModel::spatial_correlation(double baseline) const {
  if (baseline < 0.0) throw std::domain_error("baseline must be >= 0");
  switch (shape) {
    case CorrelationShape::none:
      return 0.0;
    case CorrelationShape::exponential:
      return std::exp(-baseline / corr_length);
    case CorrelationShape::gaussian:
      return std::exp(-baseline * baseline / (2.0 * corr_length * corr_length));
  }
  throw std::logic_error("unreachable correlation shape");
}

double NoiseBudget::sensor_asd() const {
  return mode == SensingMode::AC ? sensor.s_ac : sensor.s_dc;
}

double differential_psd(const SampleNoiseModel& sample, double f, double d) {
  return 2.0 * sample.single_point_psd(f) *
         (1.0 - sample.spatial_correlation(d));
}

double differential_asd(const SampleNoiseModel& sample, double f, double d) {
  return std::sqrt(differential_psd(sample, f, d));
}

double total_asd(const NoiseBudget& budget, double f, double d) {
  const double s_sens = budget.sensor_asd();
  const double s_sample = differential_asd(budget.sample, f, d);
  return std::sqrt(s_sens * s_sens + s_sample * s_sample);
}

double slowdown_factor(const NoiseBudget& budget, double f, double d) {
  const double ratio = differential_asd(budget.sample, f, d) /
                       budget.sensor_asd();
  return 1.0 + ratio * ratio;
}

bool gate_pass(const NoiseBudget& budget, double f, double d) {
  return differential_asd(budget.sample, f, d) <=
         kGateRatio * budget.sensor_asd();
}

void fft_radix2(std::vector<cplx>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("FFT length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle =
        (inverse ? 1.0 : -1.0) * constants::two_pi / static_cast<double>(len);
    const cplx wlen = std::polar(1.0, angle);
    for (std::size_t i = 0; i < n; i += len) {
      cplx w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = data[i + k];
        const cplx v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : data) x /= static_cast<double>(n);
}

namespace {
std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

std::vector<double> synthesize_timeseries(const SampleNoiseModel& sample,
                                          double baseline, double duration,
                                          double sample_rate,
                                          std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  if (n < 1024)
    throw std::domain_error("need at least 1024 samples (duration * rate)");
  const std::size_t nfft = next_pow2(n);
  const double one_minus_c = 1.0 - sample.spatial_correlation(baseline);

  std::vector<cplx> spectrum(nfft, cplx{0.0, 0.0});
  Rng rng(seed);
  const double df = sample_rate / static_cast<double>(nfft);
  for (std::size_t k = 1; k < nfft / 2; ++k) {
    const double f = df * static_cast<double>(k);
    const double psd = 2.0 * sample.single_point_psd(f) * one_minus_c;
    const double sigma =
        std::sqrt(psd * sample_rate * static_cast<double>(nfft) / 4.0);
    spectrum[k] = cplx{sigma * rng.gaussian(), sigma * rng.gaussian()};
    spectrum[nfft - k] = std::conj(spectrum[k]);
  }
  {
    const double f_nyq = 0.5 * sample_rate;
    const double psd = 2.0 * sample.single_point_psd(f_nyq) * one_minus_c;
    spectrum[nfft / 2] =
        std::sqrt(psd * sample_rate * static_cast<double>(nfft) / 2.0) *
        rng.gaussian();
  }
  fft_radix2(spectrum, true);

  std::vector<double> series(n);
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    series[j] = spectrum[j].real();
    mean += series[j];
  }
  mean /= static_cast<double>(n);
  for (auto& x : series) x -= mean;
  return series;
}

PsdEstimate psd_welch(const std::vector<double>& series, double sample_rate,
                      int segment_length) {
  const auto n = series.size();
  auto seg = static_cast<std::size_t>(segment_length);
  if (seg < 16 || seg > n)
    throw std::invalid_argument("segment length out of range");
  if ((seg & (seg - 1)) != 0)
    throw std::invalid_argument("segment length must be a power of two");

  std::vector<double> window(seg);
  double u = 0.0;
  for (std::size_t j = 0; j < seg; ++j) {
    window[j] = 0.5 * (1.0 - std::cos(constants::two_pi *
                                      static_cast<double>(j) /
                                      static_cast<double>(seg)));
    u += window[j] * window[j];
  }
  u /= static_cast<double>(seg);

  PsdEstimate est;
  est.frequency.resize(seg / 2 - 1);
  est.psd.assign(seg / 2 - 1, 0.0);
  for (std::size_t k = 1; k < seg / 2; ++k)
    est.frequency[k - 1] =
        sample_rate * static_cast<double>(k) / static_cast<double>(seg);

  const std::size_t hop = seg / 2;
  std::size_t count = 0;
  std::vector<cplx> buf(seg);
  for (std::size_t start = 0; start + seg <= n; start += hop, ++count) {
    for (std::size_t j = 0; j < seg; ++j)
      buf[j] = cplx{series[start + j] * window[j], 0.0};
    fft_radix2(buf, false);
    for (std::size_t k = 1; k < seg / 2; ++k)
      est.psd[k - 1] += 2.0 * std::norm(buf[k]) /
                        (sample_rate * static_cast<double>(seg) * u);
  }
  if (count == 0) throw std::invalid_argument("series shorter than a segment");
  for (auto& p : est.psd) p /= static_cast<double>(count);
  return est;
}

double fit_loglog_slope(const PsdEstimate& est, double f_min, double f_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long m = 0;
  for (std::size_t i = 0; i < est.frequency.size(); ++i) {
    const double f = est.frequency[i];
    if (f < f_min || f > f_max || !(est.psd[i] > 0.0)) continue;
    const double x = std::log10(f);
    const double y = std::log10(est.psd[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) throw std::invalid_argument("too few PSD bins in the fit band");
  const double denom = m * sxx - sx * sx;
  return (m * sxy - sx * sy) / denom;
}

std::vector<double> allan_deviation(const std::vector<double>& series,
                                    double sample_rate,
                                    const std::vector<double>& taus) {
  const auto n = static_cast<long>(series.size());
  if (n < 8) throw InsufficientDataError("series too short");
  const double duration = static_cast<double>(n) / sample_rate;

  std::vector<double> prefix(n + 1, 0.0);
  for (long i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + series[i];

  std::vector<double> out;
  out.reserve(taus.size());
  for (const double tau : taus) {
    if (tau > duration / 4.0)
      throw InsufficientDataError("tau exceeds a quarter of the duration");
    const long m = std::max(1L, std::lround(tau * sample_rate));
    if (n - 2 * m < 0) throw InsufficientDataError("tau too large for series");
    const long terms = n - 2 * m + 1;
    double acc = 0.0;
    for (long i = 0; i < terms; ++i) {
      const double a = (prefix[i + m] - prefix[i]) / static_cast<double>(m);
      const double b =
          (prefix[i + 2 * m] - prefix[i + m]) / static_cast<double>(m);
      acc += (b - a) * (b - a);
    }
    out.push_back(std::sqrt(acc / (2.0 * static_cast<double>(terms))));
  }
  return out;
}

void write_timeseries(const std::string& path,
                      const std::vector<double>& series, double sample_rate) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "time_s,field_V_per_m\n";
  char line[80];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n",
                  static_cast<double>(i) / sample_rate, series[i]);
    out << line;
  }
}

TimeSeries read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty time-series file");
  TimeSeries ts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    ts.time.push_back(std::stod(line.substr(0, comma)));
    ts.value.push_back(std::stod(line.substr(comma + 1)));
  }
  if (ts.time.size() < 2)
    throw std::runtime_error(path + ": need at least two samples");
  ts.sample_rate =
      static_cast<double>(ts.time.size() - 1) / (ts.time.back() - ts.time.front());
  return ts;
}

}  // namespace iongrad
