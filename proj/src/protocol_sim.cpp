#include "iongrad/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "iongrad/constants.hpp"
#include "iongrad/errors.hpp"
#include "iongrad/rng.hpp"

namespace iongrad {

namespace {

constexpr double kLeakageBudget = 1e-6;
constexpr double kSupportTol = 1e-12;
constexpr double kInvSqrt2 = 0.70710678118654752440;

using cplx = std::complex<double>;

ProtocolState resized(const ProtocolState& state, int n_max) {
  ProtocolState out;
  out.n_max = n_max;
  out.amplitudes.assign(4 * (n_max + 1), cplx{0.0, 0.0});
  const int copy = std::min(state.n_max, n_max) + 1;
  for (int spin = 0; spin < 4; ++spin)
    for (int n = 0; n < copy; ++n) out.amp(spin, n) = state.amp(spin, n);
  return out;
}

double sup_distance(const ProtocolState& a, const ProtocolState& b) {
  const int dim = std::min(a.dim(), b.dim());
  double sup = 0.0;
  for (int spin = 0; spin < 4; ++spin)
    for (int n = 0; n < dim; ++n)
      sup = std::max(sup, std::abs(a.amp(spin, n) - b.amp(spin, n)));
  // anything that leaked past the shared range counts as disagreement
  const auto tail = [&](const ProtocolState& s) {
    double t = 0.0;
    for (int spin = 0; spin < 4; ++spin)
      for (int n = dim; n < s.dim(); ++n)
        t = std::max(t, std::abs(s.amp(spin, n)));
    return t;
  };
  return std::max({sup, tail(a), tail(b)});
}

}  // namespace

ProtocolState ProtocolState::ground(int n_max) { return with_fock(0, n_max); }

ProtocolState ProtocolState::with_fock(int fock_n, int n_max) {
  if (n_max < 8) throw std::domain_error("Fock truncation must be >= 8");
  if (fock_n < 0 || fock_n > n_max)
    throw std::domain_error("initial Fock level outside the truncated space");
  ProtocolState state;
  state.n_max = n_max;
  state.amplitudes.assign(4 * (n_max + 1), cplx{0.0, 0.0});
  state.amp(kDownDown, fock_n) = 1.0;
  return state;
}

double ProtocolState::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

double ProtocolState::spin_population(int spin) const {
  double s = 0.0;
  for (int n = 0; n <= n_max; ++n) s += std::norm(amp(spin, n));
  return s;
}

double ProtocolState::edge_leakage() const {
  double s = 0.0;
  for (int spin = 0; spin < 4; ++spin)
    s += std::norm(amp(spin, n_max)) + std::norm(amp(spin, n_max - 1));
  return s;
}

ProtocolState apply_ms(const ProtocolState& state) {
  ProtocolState out = state;
  for (int n = 0; n <= state.n_max; ++n) {
    const cplx dd = state.amp(kDownDown, n);
    const cplx du = state.amp(kDownUp, n);
    const cplx ud = state.amp(kUpDown, n);
    const cplx uu = state.amp(kUpUp, n);
    out.amp(kDownDown, n) = (du + ud) * kInvSqrt2;
    out.amp(kDownUp, n) = (dd - uu) * kInvSqrt2;
    out.amp(kUpDown, n) = (dd + uu) * kInvSqrt2;
    out.amp(kUpUp, n) = (du - ud) * kInvSqrt2;
  }
  return out;
}

ProtocolState apply_ms_inverse(const ProtocolState& state) {
  ProtocolState out = state;
  for (int n = 0; n <= state.n_max; ++n) {
    const cplx dd = state.amp(kDownDown, n);
    const cplx du = state.amp(kDownUp, n);
    const cplx ud = state.amp(kUpDown, n);
    const cplx uu = state.amp(kUpUp, n);
    out.amp(kDownDown, n) = (du + ud) * kInvSqrt2;
    out.amp(kDownUp, n) = (dd + uu) * kInvSqrt2;
    out.amp(kUpDown, n) = (dd - uu) * kInvSqrt2;
    out.amp(kUpUp, n) = (-du + ud) * kInvSqrt2;
  }
  return out;
}

ProtocolState prepare_bell(const ProtocolState& state) {
  const double off_support = state.spin_population(kDownUp) +
                             state.spin_population(kUpDown) +
                             state.spin_population(kUpUp);
  if (off_support > kSupportTol)
    throw std::invalid_argument(
        "prepare_bell expects spin support on |dd> only");
  return apply_ms(state);
}

ProtocolState evolve_sdf(const ProtocolState& state, const SdfSequence& seq,
                         const TwoIonCrystal& crystal, double delta_ex,
                         long steps, const SdfConvention& convention) {
  if (steps < 1) throw std::domain_error("step count must be >= 1");
  const int dim = state.dim();
  const double g_mode = seq.g * convention.mode_projection;
  const double f_mode = constants::elementary_charge * delta_ex * crystal.x0 /
                        (std::sqrt(2.0) * constants::hbar) *
                        convention.mode_projection;
  const double spin_value[4] = {0.0, -convention.spin_weight,
                                +convention.spin_weight, 0.0};
  const double dt = seq.total_time / static_cast<double>(steps);

  std::vector<double> root(dim + 1);
  for (int n = 0; n <= dim; ++n) root[n] = std::sqrt(static_cast<double>(n));

  ProtocolState out = state;
  std::vector<cplx> term(dim), next(dim);

  for (long k = 0; k < steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    const cplx drive = std::polar(1.0, seq.delta * t_mid);  // e^{i delta t}
    for (int spin = 0; spin < 4; ++spin) {
      const double sv = spin_value[spin];
      // coefficient of a in H/hbar; the a^dag coefficient is its conjugate
      const cplx ca = g_mode * sv * drive + f_mode;
      const cplx ca_conj = std::conj(ca);
      if (ca == cplx{0.0, 0.0}) continue;

      cplx* psi = &out.amp(spin, 0);
      for (int n = 0; n < dim; ++n) term[n] = psi[n];
      // exp(-i dt H/hbar) psi by a Taylor series; converges in a few terms
      // because |H| dt is small for any sane step count.
      for (int j = 1; j <= 60; ++j) {
        const double scale = dt / static_cast<double>(j);
        double sup = 0.0;
        for (int n = 0; n < dim; ++n) {
          const cplx up = (n + 1 < dim) ? term[n + 1] : cplx{0.0, 0.0};
          const cplx down = (n > 0) ? term[n - 1] : cplx{0.0, 0.0};
          const cplx h = ca * (root[n + 1] * up) + ca_conj * (root[n] * down);
          next[n] = cplx{0.0, -1.0} * scale * h;
          sup = std::max(sup, std::abs(next[n]));
        }
        for (int n = 0; n < dim; ++n) {
          psi[n] += next[n];
          term[n] = next[n];
        }
        if (sup < 1e-17) break;
      }
    }
    const double leak = out.edge_leakage();
    if (leak > kLeakageBudget)
      throw TruncationError(
          "Fock leakage " + std::to_string(leak) + " at step " +
              std::to_string(k) + "; raise n_max to about " +
              std::to_string(state.n_max + std::max(8, state.n_max / 2)),
          state.n_max + std::max(8, state.n_max / 2));
  }
  return out;
}

ConvergedEvolution evolve_sdf_converged(const ProtocolState& state,
                                        const SdfSequence& seq,
                                        const TwoIonCrystal& crystal,
                                        double delta_ex, double tol,
                                        long initial_steps,
                                        const SdfConvention& convention) {
  constexpr long kMaxSteps = 1L << 23;
  constexpr int kMaxFock = 512;

  long start = initial_steps;
  if (start <= 0) {
    const double cycles =
        std::abs(seq.delta) * seq.total_time / constants::two_pi;
    start = std::max<long>(2048, std::lround(1024.0 * std::max(1.0, cycles)));
  }

  int n_max = state.n_max;
  for (;;) {
    try {
      const ProtocolState init = resized(state, n_max);
      ProtocolState prev =
          evolve_sdf(init, seq, crystal, delta_ex, start, convention);
      for (long steps = 2 * start; steps <= kMaxSteps; steps *= 2) {
        ProtocolState cur =
            evolve_sdf(init, seq, crystal, delta_ex, steps, convention);
        const double change = sup_distance(cur, prev);
        if (change < tol) return ConvergedEvolution{std::move(cur), steps, change};
        prev = std::move(cur);
      }
      throw std::runtime_error("SDF integrator did not converge to tolerance");
    } catch (const TruncationError& err) {
      n_max = std::max(err.required_hint, n_max + 8);
      if (n_max > kMaxFock) throw;
    }
  }
}

double relative_phase(const ProtocolState& state) {
  cplx coherence{0.0, 0.0};
  for (int n = 0; n <= state.n_max; ++n)
    coherence += state.amp(kDownUp, n) * std::conj(state.amp(kUpDown, n));
  return std::arg(coherence);
}

std::complex<double> conditional_motional_overlap(const ProtocolState& state) {
  cplx overlap{0.0, 0.0};
  double n_ud = 0.0, n_du = 0.0;
  for (int n = 0; n <= state.n_max; ++n) {
    overlap += std::conj(state.amp(kUpDown, n)) * state.amp(kDownUp, n);
    n_ud += std::norm(state.amp(kUpDown, n));
    n_du += std::norm(state.amp(kDownUp, n));
  }
  const double denom = std::sqrt(n_ud * n_du);
  if (!(denom > 0.0))
    throw std::domain_error("state has no population on the Bell branches");
  return overlap / denom;
}

double p_bright(const ProtocolState& state, double bias) {
  ProtocolState biased = state;
  if (bias != 0.0) {
    const cplx rot = std::polar(1.0, bias);
    for (int n = 0; n <= biased.n_max; ++n) biased.amp(kDownUp, n) *= rot;
  }
  const ProtocolState analyzed = apply_ms_inverse(biased);
  double p = analyzed.spin_population(kDownDown);
  return std::clamp(p, 0.0, 1.0);
}

ShotResult analyze_and_measure(const ProtocolState& state, std::uint64_t seed,
                               double bias) {
  const double p = p_bright(state, bias);
  Rng rng(seed);
  return ShotResult{rng.bernoulli(p), p};
}

std::vector<ShotResult> sample_shots(const ProtocolState& state, int shots,
                                     std::uint64_t seed, double bias) {
  if (shots < 1) throw std::domain_error("shot count must be >= 1");
  const double p = p_bright(state, bias);
  Rng rng(seed);
  std::vector<ShotResult> out;
  out.reserve(shots);
  for (int i = 0; i < shots; ++i) out.push_back({rng.bernoulli(p), p});
  return out;
}

PhaseEstimate estimate_phase(const std::vector<ShotResult>& shots) {
  long bright = 0;
  for (const auto& s : shots) bright += s.bright ? 1 : 0;
  return estimate_phase_from_counts(bright, static_cast<long>(shots.size()));
}

PhaseEstimate estimate_phase_from_counts(long bright, long total) {
  if (total < 1) throw std::invalid_argument("no shots to estimate from");
  if (bright <= 0 || bright >= total)
    throw UnidentifiablePhaseError(
        "all-bright or all-dark sample: fringe cannot be inverted");
  const double p = static_cast<double>(bright) / static_cast<double>(total);
  // P = cos^2(phi/2) => phi = arccos(2p - 1); the propagated standard error
  // of this inversion is exactly 1/sqrt(M) for a binomial p-hat.
  PhaseEstimate est;
  est.phi_hat = std::acos(2.0 * p - 1.0);
  est.std_error = 1.0 / std::sqrt(static_cast<double>(total));
  est.shots = static_cast<int>(total);
  return est;
}

std::vector<double> boltzmann_weights(double nbar, double cumulative) {
  if (nbar < 0.0) throw std::domain_error("thermal occupation must be >= 0");
  if (nbar == 0.0) return {1.0};
  const double z = nbar / (nbar + 1.0);
  std::vector<double> weights;
  double cum = 0.0;
  double p = 1.0 / (nbar + 1.0);
  while (cum < cumulative) {
    weights.push_back(p);
    cum += p;
    p *= z;
  }
  for (auto& w : weights) w /= cum;
  return weights;
}

}  // namespace iongrad
