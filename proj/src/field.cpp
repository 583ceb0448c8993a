#include "dhw/field.hpp"

#include <cmath>
#include <string>

namespace dhw {

namespace {

bool valid_handedness(int d) { return d == -1 || d == 0 || d == 1; }

// Adaptive Simpson on one subinterval. err estimate |S2 - S1| / 15 against a
// tolerance proportional to the subinterval length.
Vec3 adaptive_simpson(const FieldEval& field, double a, double b, const Vec3& fa, const Vec3& fb,
                      const Vec3& fm, double tol_per_unit, int depth) {
  const double m = 0.5 * (a + b);
  const double h = b - a;
  const double ml = 0.5 * (a + m);
  const double mr = 0.5 * (m + b);
  const Vec3 fml = field(ml);
  const Vec3 fmr = field(mr);

  const Vec3 s1 = (h / 6.0) * (fa + 4.0 * fm + fb);
  const Vec3 sl = (h / 12.0) * (fa + 4.0 * fml + fm);
  const Vec3 sr = (h / 12.0) * (fm + 4.0 * fmr + fb);
  const Vec3 s2 = sl + sr;

  const double err = norm_inf(s2 - s1) / 15.0;
  if (depth <= 0 || err <= tol_per_unit * h) {
    // local extrapolation: S2 + (S2 - S1)/15
    return s2 + (1.0 / 15.0) * (s2 - s1);
  }
  return adaptive_simpson(field, a, m, fa, fm, fml, tol_per_unit, depth - 1) +
         adaptive_simpson(field, m, b, fm, fb, fmr, tol_per_unit, depth - 1);
}

}  // namespace

void FieldConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("field config: " + what); };
  if (!(std::isfinite(E0) && std::isfinite(omega) && std::isfinite(tau) && std::isfinite(phi1) &&
        std::isfinite(phi2) && std::isfinite(T_delay) && std::isfinite(amp2_scale)))
    fail("non-finite parameter");
  if (!(E0 >= 0.0)) fail("E0 must be >= 0");
  if (!(omega > 0.0)) fail("omega must be > 0");
  if (!(tau > 0.0)) fail("tau must be > 0");
  if (!valid_handedness(delta1)) fail("delta1 must be -1, 0 or 1");
  if (!valid_handedness(delta2)) fail("delta2 must be -1, 0 or 1");
  if (!(amp2_scale >= 0.0)) fail("amp2_scale must be >= 0");
}

Vec3 vector_potential_reference(const FieldConfig& cfg, double t, double abs_err) {
  cfg.validate();
  const double t_lo = potential_start_time(cfg);
  if (t == t_lo) return {};
  const double a = std::min(t_lo, t);
  const double b = std::max(t_lo, t);

  const FieldEval field(cfg);
  // Seed the adaptive pass with chunks no longer than half a pulse duration
  // so an accidental coarse-Simpson agreement cannot end it early.
  const int n_chunks = std::max(1, int(std::ceil((b - a) / (0.5 * cfg.tau))));
  const double tol_per_unit = abs_err / (b - a);

  Vec3 total;
  double x0 = a;
  Vec3 f0 = field(x0);
  for (int c = 0; c < n_chunks; ++c) {
    const double x1 = (c == n_chunks - 1) ? b : a + (b - a) * double(c + 1) / double(n_chunks);
    const Vec3 f1 = field(x1);
    const Vec3 fm = field(0.5 * (x0 + x1));
    total += adaptive_simpson(field, x0, x1, f0, f1, fm, tol_per_unit, 48);
    x0 = x1;
    f0 = f1;
  }

  if (t < t_lo) total = -total;
  return -total;  // A = -integral of E
}

double keldysh_gamma(const FieldConfig& cfg) {
  cfg.validate();
  if (!(cfg.E0 > 0.0)) throw DomainError("keldysh_gamma undefined for E0 = 0");
  return cfg.omega / cfg.E0;
}

}  // namespace dhw
