#include "iongrad/transduction.hpp"

#include <cmath>
#include <stdexcept>

#include "iongrad/constants.hpp"

namespace iongrad {

SdfSequence SdfSequence::make(double g, double delta, double total_time,
                              int loops, double nbar) {
  if (!(total_time > 0.0))
    throw std::domain_error("interrogation time must be > 0");
  if (loops < 1) throw std::domain_error("loop count must be >= 1");
  if (nbar < 0.0) throw std::domain_error("thermal occupation must be >= 0");
  return SdfSequence{g, delta, total_time, loops, nbar};
}

SdfSequence SdfSequence::closed(double g, double delta, int loops,
                                double nbar) {
  if (delta == 0.0) throw std::domain_error("closed loops need delta != 0");
  return make(g, delta, constants::two_pi * loops / delta, loops, nbar);
}

SdfSequence SdfSequence::with_closure_error(double g, double delta, int loops,
                                            double epsilon, double nbar) {
  if (delta == 0.0) throw std::domain_error("loops need delta != 0");
  return make(g, delta, (constants::two_pi * loops + epsilon) / delta, loops,
              nbar);
}

double SdfSequence::closure_error() const {
  return delta * total_time - constants::two_pi * loops;
}

TransductionGain gain(const SdfSequence& seq, const TwoIonCrystal& crystal) {
  if (seq.delta == 0.0)
    throw std::domain_error("gain is singular at delta = 0");
  const double dT = seq.delta * seq.total_time;
  const double bracket = std::sin(dT) / (seq.delta * seq.delta) -
                         seq.total_time * std::cos(dT) / seq.delta;
  return TransductionGain{std::sqrt(2.0) * constants::elementary_charge *
                          seq.g * crystal.x0 / constants::hbar * bracket};
}

double phase_from_field(const TransductionGain& gain, double delta_ex) {
  return gain.rad_per_field * delta_ex;
}

double contrast(const SdfSequence& seq) {
  if (seq.nbar < 0.0) throw std::domain_error("thermal occupation must be >= 0");
  if (seq.delta == 0.0) throw std::domain_error("contrast needs delta != 0");
  const double x = seq.g * seq.closure_error() / seq.delta;
  return std::exp(-(2.0 * seq.nbar + 1.0) * x * x);
}

}  // namespace iongrad
