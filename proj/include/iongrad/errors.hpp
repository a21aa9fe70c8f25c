#pragma once

#include <stdexcept>
#include <string>

namespace iongrad {

// Fock-space truncation exceeded its leakage budget; `required_hint` is a
// suggested n_max for a retry.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& msg, int required_hint)
      : std::runtime_error(msg), required_hint(required_hint) {}
  int required_hint;
};

// Scenario has no signal (or an otherwise unreachable target).
class InfeasibleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A phase estimate was requested from a degenerate (all-bright/all-dark) sample.
class UnidentifiablePhaseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A time series is too short for the requested analysis.
class InsufficientDataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace iongrad
