#pragma once

#include <stdexcept>
#include <string>

namespace dhw {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or unparsable configuration (file syntax, out-of-range parameters).
struct ConfigError : Error {
  using Error::Error;
};

// An operation was called with arguments outside its domain
// (e.g. Keldysh parameter of a zero-strength field).
struct DomainError : Error {
  using Error::Error;
};

// The ODE integrator failed to reach the end of the time window.
struct SolverError : Error {
  enum class Kind { step_budget, step_underflow, nonfinite };

  SolverError(Kind k, double t, const std::string& msg) : Error(msg), kind(k), t_reached(t) {}

  Kind kind;
  double t_reached;  // last time the integrator reached before giving up
};

// A per-node solver failure inside a grid sweep, with the node attached.
struct SweepError : Error {
  SweepError(int i_, int j_, double qx_, double qy_, double qz_, const std::string& msg)
      : Error(msg), i(i_), j(j_), qx(qx_), qy(qy_), qz(qz_) {}

  int i, j;
  double qx, qy, qz;
};

// Analysis failures: empty slices, flat profiles, peak-count mismatches.
struct AnalysisError : Error {
  using Error::Error;
};

}  // namespace dhw
