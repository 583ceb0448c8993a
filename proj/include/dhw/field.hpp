#pragma once

#include <cmath>
#include <numbers>

#include "dhw/errors.hpp"
#include "dhw/vec3.hpp"

namespace dhw {

// Two time-delayed circularly polarized Gaussian pulses in the (x,y) plane.
//
// Everything is in natural units: m = e = 1, so the critical field strength
// is 1, times are in 1/m, momenta and frequencies in m. The first pulse is
// centered at t = 0, the second at t = T_delay.
struct FieldConfig {
  double E0 = 0.1 * std::numbers::sqrt2;  // field-strength scale, critical-field units
  int delta1 = 1;                         // handedness of pulse 1: +1, -1 (0 = no rotation, test fields)
  int delta2 = 1;                         // handedness of pulse 2
  double omega = 0.6;                     // carrier angular frequency
  double tau = 10.0;                      // Gaussian pulse duration
  double phi1 = 0.0;                      // carrier envelope phase of pulse 1
  double phi2 = 0.0;                      // carrier envelope phase of pulse 2
  double T_delay = 0.0;                   // center-to-center delay of pulse 2
  double amp2_scale = 1.0;                // multiplier on pulse-2 amplitude; 0 = single pulse

  // Peak amplitudes E_{1,2} = E0 / sqrt(1 + delta^2).
  double amp1() const { return E0 / std::sqrt(1.0 + double(delta1) * double(delta1)); }
  double amp2() const {
    return amp2_scale * E0 / std::sqrt(1.0 + double(delta2) * double(delta2));
  }

  bool two_pulses() const { return amp2_scale > 0.0; }

  void validate() const;  // throws ConfigError
};

// Precomputed evaluator for the hot path; one instance per solve.
struct FieldEval {
  double a1, a2, om, ph1, ph2, T, d1, d2, inv_2tau2;

  explicit FieldEval(const FieldConfig& c)
      : a1(c.amp1()),
        a2(c.amp2()),
        om(c.omega),
        ph1(c.phi1),
        ph2(c.phi2),
        T(c.T_delay),
        d1(double(c.delta1)),
        d2(double(c.delta2)),
        inv_2tau2(1.0 / (2.0 * c.tau * c.tau)) {}

  Vec3 operator()(double t) const {
    double ex = 0.0, ey = 0.0;
    if (a1 != 0.0) {
      const double g1 = a1 * std::exp(-t * t * inv_2tau2);
      const double w1 = om * t + ph1;
      ex += g1 * std::cos(w1);
      ey += g1 * d1 * std::sin(w1);
    }
    if (a2 != 0.0) {
      const double u = t - T;
      const double g2 = a2 * std::exp(-u * u * inv_2tau2);
      const double w2 = om * u + ph2;
      ex += g2 * std::cos(w2);
      ey += g2 * d2 * std::sin(w2);
    }
    return {ex, ey, 0.0};
  }
};

// E(t); the z component is identically zero.
inline Vec3 electric_field(const FieldConfig& cfg, double t) { return FieldEval(cfg)(t); }

// Lower limit used when turning the formal -infinity of the vector potential
// integral into a finite one; the envelope there is < 1e-21.
inline double potential_start_time(const FieldConfig& cfg) {
  return std::min(0.0, cfg.T_delay) - 10.0 * cfg.tau;
}

// A(t) = -Int_{t_lo}^{t} E(t') dt' by adaptive quadrature, absolute error <= abs_err.
// This is the slow reference used to cross-check the vector potential that
// solve_single carries as augmented state.
Vec3 vector_potential_reference(const FieldConfig& cfg, double t, double abs_err = 1e-10);

// Keldysh adiabaticity parameter, omega / E0 in internal units.
// Throws DomainError when E0 is zero.
double keldysh_gamma(const FieldConfig& cfg);

}  // namespace dhw
