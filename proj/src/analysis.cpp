#include "dhw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dhw/errors.hpp"

namespace dhw {

namespace {

constexpr double kPi = std::numbers::pi;

// Non-DC amplitudes below this fraction of DC mean a ring-like pattern.
constexpr double kHarmonicFloor = 0.05;

// A winding below half a radian across the analysed radii is treated as no
// winding at all (rings with an incidental weak harmonic).
constexpr double kMinTotalWinding = 0.5;

double wrap_pi(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = double(n) * sxx - sx * sx;
  return (double(n) * sxy - sx * sy) / denom;
}

// Unwrapped phases of c(r_i) and their least-squares slope in r.
double phase_slope(std::span<const double> radii, std::span<const std::complex<double>> c) {
  std::vector<double> phase(c.size());
  phase[0] = std::arg(c[0]);
  for (size_t i = 1; i < c.size(); ++i)
    phase[i] = phase[i - 1] + wrap_pi(std::arg(c[i]) - phase[i - 1]);
  return fit_slope(radii, phase);
}

// Quadratic vertex through three equally spaced samples; offset in units of
// the sample spacing, clamped to the center cell.
void refine_vertex(double fm, double f0, double fp, double& offset, double& height) {
  const double denom = fm - 2.0 * f0 + fp;
  if (!(denom < 0.0)) {  // flat or non-concave: keep the raw sample
    offset = 0.0;
    height = f0;
    return;
  }
  offset = 0.5 * (fm - fp) / denom;
  offset = std::max(-0.5, std::min(0.5, offset));
  height = f0 - 0.25 * (fm - fp) * offset;
}

}  // namespace

const char* to_string(Chirality c) {
  switch (c) {
    case Chirality::counterclockwise: return "counterclockwise";
    case Chirality::clockwise: return "clockwise";
    case Chirality::none: return "none";
  }
  return "none";
}

std::vector<Peak> find_peaks(std::span<const SlicePoint> slice, double min_prominence_frac) {
  if (slice.size() < 5) throw AnalysisError("find_peaks: slice must have at least 5 samples");
  for (size_t i = 1; i < slice.size(); ++i)
    if (!(slice[i].q > slice[i - 1].q))
      throw AnalysisError("find_peaks: slice must be strictly ascending in q");

  double fmax = 0.0;
  for (const auto& p : slice) fmax = std::max(fmax, p.f);
  const double min_prom = min_prominence_frac * fmax;

  std::vector<Peak> peaks;
  const size_t n = slice.size();
  for (size_t i = 1; i + 1 < n; ++i) {
    if (!(slice[i].f > slice[i - 1].f && slice[i].f > slice[i + 1].f)) continue;

    // topographic prominence: highest base on the descent to either side
    double left_min = slice[i].f;
    for (size_t j = i; j-- > 0;) {
      if (slice[j].f > slice[i].f) break;
      left_min = std::min(left_min, slice[j].f);
    }
    double right_min = slice[i].f;
    for (size_t j = i + 1; j < n; ++j) {
      if (slice[j].f > slice[i].f) break;
      right_min = std::min(right_min, slice[j].f);
    }
    const double prominence = slice[i].f - std::max(left_min, right_min);
    if (prominence < min_prom) continue;

    double offset, height;
    refine_vertex(slice[i - 1].f, slice[i].f, slice[i + 1].f, offset, height);
    const double dq = 0.5 * (slice[i + 1].q - slice[i - 1].q);
    peaks.push_back({slice[i].q + offset * dq, height, prominence});
  }
  return peaks;
}

std::vector<double> angular_profile(const SpectrumGrid& spec, double radius, int n_samples) {
  if (n_samples < 8) throw AnalysisError("angular_profile: need at least 8 samples");
  if (!(radius > 0.0)) throw AnalysisError("angular_profile: radius must be > 0");

  std::vector<double> out(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    const double phi = 2.0 * kPi * double(j) / double(n_samples);
    const double x = radius * std::cos(phi);
    const double y = radius * std::sin(phi);
    if (!spec.contains(x, y))
      throw AnalysisError("angular_profile: circle of radius " + std::to_string(radius) +
                          " leaves the grid");
    out[j] = spec.interpolate(x, y);
  }
  return out;
}

std::vector<std::complex<double>> angular_harmonics(std::span<const double> profile, int k_max) {
  const int n = int(profile.size());
  std::vector<std::complex<double>> c(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    std::complex<double> sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double ang = -2.0 * kPi * double(k) * double(j) / double(n);
      sum += profile[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    c[k] = sum / double(n);
  }
  return c;
}

namespace {

// Dominant-harmonic phase drift across a dense radius set centered at r0.
// The radial step must keep the winding between neighbours below pi or the
// unwrapping aliases, which is why this never runs on the (wide) analysis
// radii directly.
double dense_phase_slope(const SpectrumGrid& spec, int harmonic, double r0, double half_span,
                         int n_samples, double* winding_out) {
  const GridSpec& g = spec.grid;
  const double r_max =
      std::min(std::min(-g.qx_min, g.qx_max), std::min(-g.qy_min, g.qy_max));
  double hi = std::min(r0 + half_span, r_max);
  double lo = std::max(hi - 2.0 * half_span, 1e-3 * r_max);
  if (!(hi > lo)) throw AnalysisError("dense_phase_slope: degenerate radius window");

  const int n_radii = 13;
  std::vector<double> radii(n_radii);
  std::vector<std::complex<double>> ck(n_radii);
  for (int i = 0; i < n_radii; ++i) {
    radii[i] = lo + (hi - lo) * double(i) / double(n_radii - 1);
    ck[i] = angular_harmonics(angular_profile(spec, radii[i], n_samples), harmonic)[harmonic];
  }
  const double slope = phase_slope(radii, ck);
  if (winding_out) *winding_out = std::fabs(slope) * (hi - lo);
  return slope;
}

}  // namespace

ArmCount arm_count_and_chirality(const SpectrumGrid& spec, std::span<const double> radii,
                                 int n_samples) {
  if (radii.size() < 3)
    throw AnalysisError("arm_count_and_chirality: need at least 3 radii");

  const int k_max = std::min(n_samples / 2 - 1, 64);
  std::vector<std::vector<std::complex<double>>> per_radius;
  per_radius.reserve(radii.size());
  for (double r : radii)
    per_radius.push_back(angular_harmonics(angular_profile(spec, r, n_samples), k_max));

  std::vector<double> mean_amp(k_max + 1, 0.0);
  for (const auto& c : per_radius)
    for (int k = 0; k <= k_max; ++k) mean_amp[k] += std::abs(c[k]) / double(per_radius.size());

  ArmCount res;
  res.dc_amp = mean_amp[0];
  int dominant = 1;
  for (int k = 2; k <= k_max; ++k)
    if (mean_amp[k] > mean_amp[dominant]) dominant = k;
  double second = 0.0;
  for (int k = 1; k <= k_max; ++k)
    if (k != dominant) second = std::max(second, mean_amp[k]);

  res.dominant_amp = mean_amp[dominant];
  res.second_amp = second;

  if (res.dominant_amp < kHarmonicFloor * res.dc_amp) {
    res.dominant = 0;  // ring-like: no angular structure worth classifying
    res.chirality = Chirality::none;
    return res;
  }
  res.dominant = dominant;

  // Phase slope around the strongest of the given radii.
  double r_best = radii[0];
  double amp_best = -1.0;
  for (size_t i = 0; i < radii.size(); ++i) {
    const double a = std::abs(per_radius[i][dominant]);
    if (a > amp_best) {
      amp_best = a;
      r_best = radii[i];
    }
  }
  double winding = 0.0;
  res.phase_slope = dense_phase_slope(spec, dominant, r_best, 0.05, n_samples, &winding);

  // Frozen mapping, calibrated on synthetic envelopes: the fringe term
  // cos(theta0(q) + S phi) puts exp(-i theta0) into c_|S| for S < 0, so a
  // negative radial phase slope means the pattern advances counterclockwise
  // with growing q.
  if (winding < kMinTotalWinding)
    res.chirality = Chirality::none;
  else
    res.chirality =
        res.phase_slope < 0.0 ? Chirality::counterclockwise : Chirality::clockwise;
  return res;
}

double estimate_rotation(const SpectrumGrid& a, const SpectrumGrid& b, double radius,
                         int n_samples) {
  std::vector<double> pa = angular_profile(a, radius, n_samples);
  std::vector<double> pb = angular_profile(b, radius, n_samples);

  auto center = [](std::vector<double>& p) {
    double mean = 0.0;
    for (double v : p) mean += v / double(p.size());
    double spread = 0.0;
    for (double& v : p) {
      v -= mean;
      spread = std::max(spread, std::fabs(v));
    }
    // flat up to interpolation roundoff
    return spread > 1e-12 * std::fabs(mean) ? spread : 0.0;
  };
  const double sa = center(pa);
  const double sb = center(pb);
  if (!(sa > 0.0) || !(sb > 0.0))
    throw AnalysisError("estimate_rotation: flat angular profile");

  const int n = n_samples;
  std::vector<double> corr(n, 0.0);
  for (int s = 0; s < n; ++s) {
    double c = 0.0;
    for (int j = 0; j < n; ++j) c += pa[j] * pb[(j + s) % n];
    corr[s] = c;
  }

  const double cmax = *std::max_element(corr.begin(), corr.end());
  const double cmin = *std::min_element(corr.begin(), corr.end());
  const double tie_band = cmax - 1e-3 * (cmax - cmin);

  // Collect near-maximal local maxima and keep the smallest rotation angle;
  // this resolves the antipodal ambiguity of symmetric profiles.
  const double dphi = 2.0 * kPi / double(n);
  double best_angle = 0.0;
  bool have = false;
  for (int s = 0; s < n; ++s) {
    const double prev = corr[(s + n - 1) % n];
    const double next = corr[(s + 1) % n];
    if (!(corr[s] >= prev && corr[s] >= next && corr[s] >= tie_band)) continue;
    double offset, height;
    refine_vertex(prev, corr[s], next, offset, height);
    const double angle = wrap_pi((double(s) + offset) * dphi);
    if (!have || std::fabs(angle) < std::fabs(best_angle)) {
      best_angle = angle;
      have = true;
    }
  }
  if (!have) throw AnalysisError("estimate_rotation: no correlation maximum");
  return best_angle;
}

RingSupport ring_support(const SpectrumGrid& spec, double frac, int n_radial, int n_samples) {
  const GridSpec& g = spec.grid;
  const double r_max = std::min(std::min(-g.qx_min, g.qx_max), std::min(-g.qy_min, g.qy_max));
  if (!(r_max > 0.0))
    throw AnalysisError("ring_support: grid does not enclose the origin");

  std::vector<double> radial_max(n_radial, 0.0);
  RingSupport res;
  for (int i = 0; i < n_radial; ++i) {
    const double r = r_max * double(i + 1) / double(n_radial);
    for (int j = 0; j < n_samples; ++j) {
      const double phi = 2.0 * kPi * double(j) / double(n_samples);
      radial_max[i] =
          std::max(radial_max[i], spec.interpolate(r * std::cos(phi), r * std::sin(phi)));
    }
    res.max_f = std::max(res.max_f, radial_max[i]);
  }

  const double thresh = frac * res.max_f;
  int first = -1, last = -1;
  for (int i = 0; i < n_radial; ++i) {
    if (radial_max[i] >= thresh) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) throw AnalysisError("ring_support: empty spectrum");
  res.q_in = r_max * double(first + 1) / double(n_radial);
  res.q_out = r_max * double(last + 1) / double(n_radial);
  return res;
}

std::vector<double> default_radii(const SpectrumGrid& spec, int count) {
  const RingSupport s = ring_support(spec);
  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] = s.q_in + (s.q_out - s.q_in) * double(i) / double(count - 1);
  return radii;
}

std::vector<double> ring_core_radii(const SpectrumGrid& spec, double frac, int count) {
  const GridSpec& g = spec.grid;
  const double r_max = std::min(std::min(-g.qx_min, g.qx_max), std::min(-g.qy_min, g.qy_max));
  if (!(r_max > 0.0)) throw AnalysisError("ring_core_radii: grid does not enclose the origin");

  const int n_radial = 400, n_samples = 256;
  std::vector<double> profile(n_radial);
  double pmax = 0.0;
  int imax = 0;
  for (int i = 0; i < n_radial; ++i) {
    const double r = r_max * double(i + 1) / double(n_radial);
    double mean = 0.0;
    for (int j = 0; j < n_samples; ++j) {
      const double phi = 2.0 * kPi * double(j) / double(n_samples);
      mean += spec.interpolate(r * std::cos(phi), r * std::sin(phi));
    }
    profile[i] = mean / double(n_samples);
    if (profile[i] > pmax) {
      pmax = profile[i];
      imax = i;
    }
  }
  if (!(pmax > 0.0)) throw AnalysisError("ring_core_radii: empty spectrum");

  int lo = imax, hi = imax;
  while (lo > 0 && profile[lo - 1] >= frac * pmax) --lo;
  while (hi + 1 < n_radial && profile[hi + 1] >= frac * pmax) ++hi;

  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] =
        r_max * (double(lo + 1) + double(hi - lo) * double(i) / double(count - 1)) /
        double(n_radial);
  return radii;
}

std::optional<PitchMeasurement> measure_pitch(const SpectrumGrid& spec, double q_center,
                                              double half_span, int n_radii, int n_samples) {
  if (n_radii < 3) throw AnalysisError("measure_pitch: need at least 3 radii");
  std::vector<double> radii(n_radii);
  for (int i = 0; i < n_radii; ++i)
    radii[i] = q_center - half_span + 2.0 * half_span * double(i) / double(n_radii - 1);

  const int k_max = std::min(n_samples / 2 - 1, 64);
  std::vector<std::vector<std::complex<double>>> per_radius;
  per_radius.reserve(radii.size());
  for (double r : radii)
    per_radius.push_back(angular_harmonics(angular_profile(spec, r, n_samples), k_max));

  std::vector<double> mean_amp(k_max + 1, 0.0);
  for (const auto& c : per_radius)
    for (int k = 0; k <= k_max; ++k) mean_amp[k] += std::abs(c[k]) / double(per_radius.size());

  int dominant = 1;
  for (int k = 2; k <= k_max; ++k)
    if (mean_amp[k] > mean_amp[dominant]) dominant = k;
  if (mean_amp[dominant] < kHarmonicFloor * mean_amp[0]) return std::nullopt;

  std::vector<std::complex<double>> ck(per_radius.size());
  for (size_t i = 0; i < per_radius.size(); ++i) ck[i] = per_radius[i][dominant];

  PitchMeasurement m;
  m.harmonic = dominant;
  m.phase_slope = phase_slope(radii, ck);
  m.pitch = std::fabs(m.phase_slope) / double(dominant);
  return m;
}

Table1Report table1_report(const FieldConfig& cfg, const SolverSettings& set,
                           const SliceSpec& slice, int k_min, int k_max,
                           double min_prominence_frac, int jobs) {
  if (cfg.delta1 != cfg.delta2)
    throw AnalysisError("table1_report: field must have equal handedness (rings)");
  if (!(cfg.T_delay > 0.0)) throw AnalysisError("table1_report: needs a positive time delay");

  std::vector<std::pair<int, double>> fringes;
  if (k_min == 0 && k_max == 0) {
    fringes = ramsey_peaks_in_window(cfg.T_delay, slice.q_min, slice.q_max);
  } else {
    for (int k = k_min; k <= k_max; ++k)
      if (auto q = ramsey_peak(cfg.T_delay, k)) fringes.emplace_back(k, *q);
  }
  if (fringes.empty()) throw AnalysisError("table1_report: no fringes in the slice window");

  const std::vector<SlicePoint> points = compute_slice_1d(cfg, slice, set, jobs);
  const std::vector<Peak> peaks = find_peaks(points, min_prominence_frac);

  if (peaks.size() != fringes.size()) {
    std::ostringstream oss;
    oss << "table1_report: found " << peaks.size() << " peaks but expected " << fringes.size()
        << "; peaks at:";
    for (const auto& p : peaks) oss << " " << p.q;
    throw AnalysisError(oss.str());
  }

  Table1Report rep;
  rep.all_diffs_positive = true;
  for (size_t i = 0; i < peaks.size(); ++i) {
    Table1Row row;
    row.k = fringes[i].first;
    row.q_num = peaks[i].q;
    row.q_eva = fringes[i].second;
    row.diff = row.q_eva - row.q_num;
    if (!(row.diff > 0.0)) rep.all_diffs_positive = false;
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

constexpr ReferenceFringe kReferenceFringes[] = {
    {33, 0.26157, 0.27350}, {34, 0.36759, 0.37540}, {35, 0.45361, 0.45719},
    {36, 0.52463, 0.52830}, {37, 0.58865, 0.59258}, {38, 0.64766, 0.65205},
    {39, 0.70368, 0.70793}, {40, 0.75569, 0.76101}, {41, 0.80670, 0.81184},
    {42, 0.85571, 0.86081}, {43, 0.90373, 0.90823},
};

}  // namespace

std::span<const ReferenceFringe> reference_fringes() { return kReferenceFringes; }

AnalysisReport analyze_spectrum(const SpectrumGrid& spec, const SpectrumGrid* reference,
                                double pitch_q, int n_radii, int n_samples) {
  AnalysisReport rep;
  rep.density = density_2d(spec);
  rep.support = ring_support(spec);
  rep.radii = default_radii(spec, n_radii);

  const ArmCount arms = arm_count_and_chirality(spec, rep.radii, n_samples);
  rep.dominant_harmonic = arms.dominant;
  rep.chirality = arms.chirality;

  const double mid_radius = 0.5 * (rep.support.q_in + rep.support.q_out);
  rep.harmonics = angular_harmonics(angular_profile(spec, mid_radius, n_samples),
                                    std::min(n_samples / 2 - 1, 16));

  // azimuth-averaged radial profile and its peaks
  const GridSpec& g = spec.grid;
  const double r_max = std::min(std::min(-g.qx_min, g.qx_max), std::min(-g.qy_min, g.qy_max));
  const int n_radial = 400;
  std::vector<SlicePoint> radial(n_radial);
  for (int i = 0; i < n_radial; ++i) {
    const double r = r_max * double(i + 1) / double(n_radial);
    double mean = 0.0;
    for (int j = 0; j < n_samples; ++j) {
      const double phi = 2.0 * kPi * double(j) / double(n_samples);
      mean += spec.interpolate(r * std::cos(phi), r * std::sin(phi));
    }
    radial[i] = {r, mean / double(n_samples)};
  }
  rep.radial_peaks = find_peaks(radial, 1e-3);

  rep.pitch_q = pitch_q > 0.0 ? pitch_q : mid_radius;
  rep.pitch = measure_pitch(spec, rep.pitch_q);

  if (reference) {
    rep.rotation_estimate = estimate_rotation(*reference, spec, mid_radius, n_samples);
    rep.has_rotation = true;
  }
  return rep;
}

std::string to_text(const AnalysisReport& rep) {
  std::ostringstream oss;
  oss.precision(6);
  oss << "density_2d = " << rep.density.value << "\n";
  oss << "support_ok = " << (rep.density.support_ok ? "yes" : "no") << "\n";
  oss << "q_in = " << rep.support.q_in << "\n";
  oss << "q_out = " << rep.support.q_out << "\n";
  oss << "max_f = " << rep.support.max_f << "\n";
  oss << "dominant_harmonic = " << rep.dominant_harmonic << "\n";
  oss << "chirality = " << to_string(rep.chirality) << "\n";
  if (rep.pitch) {
    oss << "pitch_q = " << rep.pitch_q << "\n";
    oss << "pitch = " << rep.pitch->pitch << "\n";
    oss << "pitch_harmonic = " << rep.pitch->harmonic << "\n";
  }
  if (rep.has_rotation) oss << "rotation_vs_reference = " << rep.rotation_estimate << "\n";

  oss << "\nharmonics (k, |c_k|):\n";
  for (size_t k = 0; k < rep.harmonics.size(); ++k)
    oss << "  " << k << "  " << std::abs(rep.harmonics[k]) << "\n";

  oss << "\nradial peaks (q, f, prominence):\n";
  for (const auto& p : rep.radial_peaks)
    oss << "  " << p.q << "  " << p.f << "  " << p.prominence << "\n";

  if (!rep.table1_rows.empty()) {
    oss << "\nfringe comparison (k, q_num, q_eva, diff):\n";
    oss.precision(5);
    oss << std::fixed;
    for (const auto& r : rep.table1_rows)
      oss << "  " << r.k << "  " << r.q_num << "  " << r.q_eva << "  " << r.diff << "\n";
  }
  return oss.str();
}

}  // namespace dhw
