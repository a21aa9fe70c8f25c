#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace iongrad {

// Instrument noise-equivalent field sensitivities (V m^-1 / sqrt(Hz)).
struct SensorSensitivity {
  double s_dc = 0.0;
  double s_ac = 0.0;
  double f0 = 0.0;  // demodulation frequency, Hz

  static SensorSensitivity make(double s_dc, double s_ac, double f0);
};

enum class CorrelationShape { exponential, gaussian, none };

// Single-point sample field-noise PSD A/f^alpha plus a spatial correlation
// kernel over the ion baseline. The kernel is frequency-independent; only the
// correlation-length phenomenology is modeled.
struct SampleNoiseModel {
  double amplitude = 0.0;     // A, V^2 m^-2 / Hz at 1 Hz
  double alpha = 0.0;         // spectral exponent, in [0, 3]
  double corr_length = 1e-4;  // m, used when shape != none
  CorrelationShape shape = CorrelationShape::none;

  static SampleNoiseModel make(double amplitude, double alpha,
                               double corr_length, CorrelationShape shape);
  // Flat differential ASD `s` regardless of f and d (shape none, A = s^2/2).
  static SampleNoiseModel flat_differential(double asd);

  double single_point_psd(double f) const;  // V^2 m^-2 / Hz
  double spatial_correlation(double baseline) const;
};

enum class SensingMode { AC, DC };

struct NoiseBudget {
  SensorSensitivity sensor;
  SampleNoiseModel sample;
  SensingMode mode = SensingMode::AC;

  double sensor_asd() const;  // by mode
};

// Differential field-noise PSD 2 S_E(f) [1 - C(d)], V^2 m^-2/Hz.
double differential_psd(const SampleNoiseModel& sample, double f, double d);
double differential_asd(const SampleNoiseModel& sample, double f, double d);

// Quadrature sum of the sensor ASD and the sample differential ASD.
double total_asd(const NoiseBudget& budget, double f, double d);

// tau/tau0 = 1 + (s_sample/s_sens)^2.
double slowdown_factor(const NoiseBudget& budget, double f, double d);

// s_sample <= 0.45 s_sens, the <=20% integration-time penalty gate.
bool gate_pass(const NoiseBudget& budget, double f, double d);
inline constexpr double kGateRatio = 0.45;
inline constexpr double kGateSlowdown = 1.0 + kGateRatio * kGateRatio;

// Synthesizes a real, zero-mean series whose periodogram follows the target
// differential PSD 2 S_E(f) [1 - C(baseline)], by spectral shaping of seeded
// Gaussian white noise with a Hermitian-symmetric spectrum.
// Needs duration*sample_rate >= 1024 samples.
std::vector<double> synthesize_timeseries(const SampleNoiseModel& sample,
                                          double baseline, double duration,
                                          double sample_rate,
                                          std::uint64_t seed);

struct PsdEstimate {
  std::vector<double> frequency;  // Hz
  std::vector<double> psd;        // one-sided, V^2 m^-2 / Hz
};

// Welch averaged periodogram: Hann window, 50% overlap.
PsdEstimate psd_welch(const std::vector<double>& series, double sample_rate,
                      int segment_length);

// Least-squares slope of log10(psd) vs log10(f) over [f_min, f_max].
double fit_loglog_slope(const PsdEstimate& est, double f_min, double f_max);

// Overlapping Allan deviation at averaging times tau (s). Throws
// InsufficientDataError if any tau exceeds duration/4.
std::vector<double> allan_deviation(const std::vector<double>& series,
                                    double sample_rate,
                                    const std::vector<double>& taus);

// Two-column comma-separated time series with a one-line header.
void write_timeseries(const std::string& path,
                      const std::vector<double>& series, double sample_rate);
struct TimeSeries {
  std::vector<double> time;
  std::vector<double> value;
  double sample_rate = 0.0;  // inferred from the time column
};
TimeSeries read_timeseries(const std::string& path);

// Radix-2 in-place FFT (inverse = true divides by n). Internal utility,
// exposed for the analysis paths and tests.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace iongrad
