#pragma once

#include <stdexcept>
#include <string>

namespace kspe {

// An argument violates a documented precondition (bad exponent, bad level,
// malformed grid size, ...).
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A point or exponent lies outside the mathematical domain of the operation.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// A coefficient family with off-diagonal structure was requested; only
// diagonal families are discretized here.
struct unsupported_anisotropy : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative linear solve hit its iteration cap before reaching tolerance.
struct iteration_limit : std::runtime_error {
  double residual;
  int iterations;
  iteration_limit(const std::string& what, double res, int iters)
      : std::runtime_error(what), residual(res), iterations(iters) {}
};

// The per-step fixed-point loop failed to contract.
struct step_failure : std::runtime_error {
  int step_index;
  double gap;
  step_failure(const std::string& what, int step, double g)
      : std::runtime_error(what), step_index(step), gap(g) {}
};

// A structural guarantee of the scheme (positivity, mass control) was broken
// by more than roundoff.  Always a bug or a too-large time step; never masked.
struct invariant_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kspe
