#pragma once

#include <functional>

#include "dhw/field.hpp"
#include "dhw/vec3.hpp"

namespace dhw {

// Canonical momentum of the pair mode, conserved during the evolution.
struct Momentum {
  double qx = 0.0;
  double qy = 0.0;
  double qz = 0.0;
};

// The ten dynamical components of the equal-time Wigner hierarchy for a
// homogeneous field (occupation f, auxiliary vector v, components a and t),
// plus the vector potential A integrated alongside as augmented state.
struct WignerState {
  double f = 0.0;
  Vec3 v;
  Vec3 a_vec;
  Vec3 t_vec;
  Vec3 A;
};

struct SolverSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double pad = 8.0;            // window padding in multiples of tau beyond the pulse centers
  long max_steps = 2'000'000;  // accepted + rejected step budget

  void validate() const;  // throws ConfigError
};

// Right-hand side of the equations of motion at time t. Kinetic momentum is
// p = q - A, total energy Omega = sqrt(1 + p^2) >= 1.
WignerState wigner_rhs(const FieldConfig& cfg, const Momentum& q, double t,
                       const WignerState& s);

// Integration window [start, end]: pad*tau beyond the outermost pulse center
// (the second center is ignored when pulse 2 is disabled).
double integration_start(const FieldConfig& cfg, double pad);
double integration_end(const FieldConfig& cfg, double pad);

struct SolveResult {
  double f = 0.0;       // asymptotic one-particle distribution value
  WignerState state;    // full final state, A included
  double t_end = 0.0;
  long n_steps = 0;     // accepted steps
  long n_rejected = 0;
};

// Called after every accepted step when a trajectory is wanted.
using StepObserver = std::function<void(double t, const WignerState&)>;

// Integrates the vacuum initial condition through the pulse sequence for one
// canonical momentum with an adaptive embedded Dormand-Prince 5(4) pair and
// PI step control. Pure function of its arguments; safe to call concurrently.
// Throws SolverError on step-budget exhaustion or non-finite state.
SolveResult solve_single(const FieldConfig& cfg, const Momentum& q, const SolverSettings& set,
                         const StepObserver* observer = nullptr);

// Fixed-step classic RK4 over the same window. Deliberately independent of
// the adaptive path; kept as the cross-check oracle.
SolveResult solve_single_rk4(const FieldConfig& cfg, const Momentum& q, long n_steps,
                             double pad = 8.0);

}  // namespace dhw
