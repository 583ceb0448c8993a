#include "dhw/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "dhw/errors.hpp"

namespace dhw {

namespace {

// State layout: [f, v, a, t, A] = 13 doubles.
constexpr int kDim = 13;

void pack(const WignerState& s, double* y) {
  y[0] = s.f;
  y[1] = s.v.x;
  y[2] = s.v.y;
  y[3] = s.v.z;
  y[4] = s.a_vec.x;
  y[5] = s.a_vec.y;
  y[6] = s.a_vec.z;
  y[7] = s.t_vec.x;
  y[8] = s.t_vec.y;
  y[9] = s.t_vec.z;
  y[10] = s.A.x;
  y[11] = s.A.y;
  y[12] = s.A.z;
}

WignerState unpack(const double* y) {
  WignerState s;
  s.f = y[0];
  s.v = {y[1], y[2], y[3]};
  s.a_vec = {y[4], y[5], y[6]};
  s.t_vec = {y[7], y[8], y[9]};
  s.A = {y[10], y[11], y[12]};
  return s;
}

// Equations of motion in natural units (m = e = 1):
//   df/dt = (E.v) / (2 Omega)
//   dv/dt = (2/Omega^3) [(E.p) p - E Omega^2] (f - 1) - (E.v) p / Omega^2
//           - 2 p x a - 2 t
//   da/dt = -2 p x v
//   dt/dt = 2 [v + (p.v) p]
//   dA/dt = -E
// with p = q - A and Omega^2 = 1 + p.p. The (p.v) p coupling keeps the
// free (v, t) oscillation at 2 Omega for every p; with the opposite sign the
// pair turns exponentially unstable for |p| > 1 and the occupation leaves
// [0, 2].
inline void rhs_raw(const FieldEval& field, double qx, double qy, double qz, double t,
                    const double* y, double* dy) {
  const Vec3 e = field(t);

  const double px = qx - y[10];
  const double py = qy - y[11];
  const double pz = qz - y[12];
  const double om2 = 1.0 + px * px + py * py + pz * pz;
  const double om = std::sqrt(om2);
  const double om3 = om2 * om;

  const double vx = y[1], vy = y[2], vz = y[3];
  const double ax = y[4], ay = y[5], az = y[6];
  const double tx = y[7], ty = y[8], tz = y[9];

  const double edv = e.x * vx + e.y * vy + e.z * vz;
  const double edp = e.x * px + e.y * py + e.z * pz;
  const double pdv = px * vx + py * vy + pz * vz;

  dy[0] = 0.5 * edv / om;

  const double src = 2.0 * (y[0] - 1.0) / om3;
  const double drift = edv / om2;
  dy[1] = src * (edp * px - e.x * om2) - drift * px - 2.0 * (py * az - pz * ay) - 2.0 * tx;
  dy[2] = src * (edp * py - e.y * om2) - drift * py - 2.0 * (pz * ax - px * az) - 2.0 * ty;
  dy[3] = src * (edp * pz - e.z * om2) - drift * pz - 2.0 * (px * ay - py * ax) - 2.0 * tz;

  dy[4] = -2.0 * (py * vz - pz * vy);
  dy[5] = -2.0 * (pz * vx - px * vz);
  dy[6] = -2.0 * (px * vy - py * vx);

  dy[7] = 2.0 * (vx + pdv * px);
  dy[8] = 2.0 * (vy + pdv * py);
  dy[9] = 2.0 * (vz + pdv * pz);

  dy[10] = -e.x;
  dy[11] = -e.y;
  dy[12] = -e.z;
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - bhat, the embedded 4th-order error weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

bool all_finite(const double* y) {
  for (int i = 0; i < kDim; ++i)
    if (!std::isfinite(y[i])) return false;
  return true;
}

}  // namespace

void SolverSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw ConfigError("solver config: tolerances must be > 0");
  if (!(pad >= 5.0)) throw ConfigError("solver config: pad must be >= 5");
  if (max_steps <= 0) throw ConfigError("solver config: max_steps must be > 0");
}

double integration_start(const FieldConfig& cfg, double pad) {
  const double center = cfg.two_pulses() ? std::min(0.0, cfg.T_delay) : 0.0;
  return center - pad * cfg.tau;
}

double integration_end(const FieldConfig& cfg, double pad) {
  const double center = cfg.two_pulses() ? std::max(0.0, cfg.T_delay) : 0.0;
  return center + pad * cfg.tau;
}

WignerState wigner_rhs(const FieldConfig& cfg, const Momentum& q, double t,
                       const WignerState& s) {
  const FieldEval field(cfg);
  double y[kDim], dy[kDim];
  pack(s, y);
  rhs_raw(field, q.qx, q.qy, q.qz, t, y, dy);
  return unpack(dy);
}

SolveResult solve_single(const FieldConfig& cfg, const Momentum& q, const SolverSettings& set,
                         const StepObserver* observer) {
  cfg.validate();
  set.validate();

  const double t0 = integration_start(cfg, set.pad);
  const double t1 = integration_end(cfg, set.pad);
  const FieldEval field(cfg);

  double y[kDim] = {0.0};  // vacuum initial conditions, A(t0) = 0
  double k1[kDim], k2[kDim], k3[kDim], k4[kDim], k5[kDim], k6[kDim], k7[kDim];
  double ytmp[kDim], ynew[kDim];

  double t = t0;
  const double hmax = cfg.tau;  // never step past the envelope scale
  double h = std::min(hmax, 1e-3 * (t1 - t0));
  double facold = 1e-4;
  long n_steps = 0, n_rejected = 0;

  rhs_raw(field, q.qx, q.qy, q.qz, t, y, k1);

  while (t < t1) {
    if (n_steps + n_rejected >= set.max_steps)
      throw SolverError(SolverError::Kind::step_budget, t,
                        "solve_single: step budget exhausted at t = " + std::to_string(t));
    h = std::min(h, t1 - t);

    for (int i = 0; i < kDim; ++i) ytmp[i] = y[i] + h * (a21 * k1[i]);
    rhs_raw(field, q.qx, q.qy, q.qz, t + c2 * h, ytmp, k2);
    for (int i = 0; i < kDim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs_raw(field, q.qx, q.qy, q.qz, t + c3 * h, ytmp, k3);
    for (int i = 0; i < kDim; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_raw(field, q.qx, q.qy, q.qz, t + c4 * h, ytmp, k4);
    for (int i = 0; i < kDim; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_raw(field, q.qx, q.qy, q.qz, t + c5 * h, ytmp, k5);
    for (int i = 0; i < kDim; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs_raw(field, q.qx, q.qy, q.qz, t + h, ytmp, k6);
    for (int i = 0; i < kDim; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs_raw(field, q.qx, q.qy, q.qz, t + h, ynew, k7);  // FSAL stage

    double err = 0.0;
    for (int i = 0; i < kDim; ++i) {
      const double sc =
          set.abs_tol + set.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      const double d = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      err += (d / sc) * (d / sc);
    }
    err = std::sqrt(err / kDim);

    if (err <= 1.0) {
      t += h;
      std::memcpy(y, ynew, sizeof(y));
      std::memcpy(k1, k7, sizeof(k1));
      ++n_steps;
      if (!all_finite(y))
        throw SolverError(SolverError::Kind::nonfinite, t,
                          "solve_single: non-finite state at t = " + std::to_string(t));
      if (observer && *observer) (*observer)(t, unpack(y));

      // PI step-size controller (Hairer dopri5 constants).
      const double fac11 = std::pow(err, 0.17);
      double fac = fac11 / std::pow(facold, 0.04);
      fac = std::max(0.1, std::min(5.0, fac / 0.9));
      facold = std::max(err, 1e-4);
      h = std::min(h / fac, hmax);
    } else {
      ++n_rejected;
      const double fac11 = std::pow(err, 0.17);
      h = h / std::min(5.0, fac11 / 0.9);
      if (!(h > 1e-14 * (t1 - t0)))
        throw SolverError(SolverError::Kind::step_underflow, t,
                          "solve_single: step size underflow at t = " + std::to_string(t));
    }
  }

  SolveResult res;
  res.f = y[0];
  res.state = unpack(y);
  res.t_end = t;
  res.n_steps = n_steps;
  res.n_rejected = n_rejected;
  return res;
}

SolveResult solve_single_rk4(const FieldConfig& cfg, const Momentum& q, long n_steps,
                             double pad) {
  cfg.validate();
  if (n_steps <= 0) throw ConfigError("solve_single_rk4: n_steps must be > 0");

  const double t0 = integration_start(cfg, pad);
  const double t1 = integration_end(cfg, pad);
  const double h = (t1 - t0) / double(n_steps);
  const FieldEval field(cfg);

  double y[kDim] = {0.0};
  double k1[kDim], k2[kDim], k3[kDim], k4[kDim], ytmp[kDim];

  for (long n = 0; n < n_steps; ++n) {
    const double t = t0 + h * double(n);
    rhs_raw(field, q.qx, q.qy, q.qz, t, y, k1);
    for (int i = 0; i < kDim; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
    rhs_raw(field, q.qx, q.qy, q.qz, t + 0.5 * h, ytmp, k2);
    for (int i = 0; i < kDim; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
    rhs_raw(field, q.qx, q.qy, q.qz, t + 0.5 * h, ytmp, k3);
    for (int i = 0; i < kDim; ++i) ytmp[i] = y[i] + h * k3[i];
    rhs_raw(field, q.qx, q.qy, q.qz, t + h, ytmp, k4);
    for (int i = 0; i < kDim; ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  SolveResult res;
  res.f = y[0];
  res.state = unpack(y);
  res.t_end = t1;
  res.n_steps = n_steps;
  res.n_rejected = 0;
  return res;
}

}  // namespace dhw
