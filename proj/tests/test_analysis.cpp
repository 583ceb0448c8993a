#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "dhw/analysis.hpp"
#include "dhw/semiclassical.hpp"

using namespace dhw;

namespace {

constexpr double kPi = std::numbers::pi;

// Synthetic spectrum from an analytic function of (qx, qy).
SpectrumGrid make_synthetic(const std::function<double(double, double)>& fn, int n,
                            double extent) {
  SpectrumGrid spec;
  spec.grid.qx_min = spec.grid.qy_min = -extent;
  spec.grid.qx_max = spec.grid.qy_max = extent;
  spec.grid.nx = spec.grid.ny = n;
  spec.values.resize(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) spec.at(i, j) = fn(spec.grid.qx(i), spec.grid.qy(j));
  return spec;
}

double ring_window(double r) { return std::exp(-std::pow((r - 0.64) / 0.18, 2)); }

// Windowed interference pattern for a two-pulse prediction.
SpectrumGrid make_vortex(const SpiralPrediction& p, int n = 512, double extent = 1.2) {
  return make_synthetic(
      [&](double x, double y) {
        const double r = std::hypot(x, y);
        return envelope(r, std::atan2(y, x), p) * ring_window(r);
      },
      n, extent);
}

}  // namespace

TEST_CASE("find_peaks on a synthetic sin^2 signal") {
  std::vector<SlicePoint> slice;
  for (int i = 0; i < 4000; ++i) {
    const double q = 1.5 * double(i) / 3999.0;
    slice.push_back({q, std::pow(std::sin(10.0 * q), 2)});
  }
  const auto peaks = find_peaks(slice, 1e-3);
  REQUIRE(peaks.size() >= 4);
  for (const auto& p : peaks) {
    // peaks of sin^2(10 q) sit at odd multiples of pi / 20
    const double k = std::round((p.q - kPi / 20.0) / (kPi / 10.0));
    const double expected = kPi / 20.0 + k * kPi / 10.0;
    CHECK(std::fabs(p.q - expected) < 1e-4);
    CHECK(p.f == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("find_peaks: monotone input, short input, prominence filter") {
  std::vector<SlicePoint> rising;
  for (int i = 0; i < 100; ++i) rising.push_back({double(i), double(i) * 0.1});
  CHECK(find_peaks(rising, 1e-3).empty());

  std::vector<SlicePoint> tiny = {{0, 0}, {1, 1}, {2, 0}};
  CHECK_THROWS_AS(find_peaks(tiny, 1e-3), AnalysisError);

  // a ripple of 1e-4 on a peak of height 1 is filtered at 1e-3 prominence
  std::vector<SlicePoint> ripple;
  for (int i = 0; i < 1000; ++i) {
    const double q = double(i) / 999.0;
    ripple.push_back({q, std::exp(-std::pow((q - 0.5) / 0.2, 2)) + 1e-4 * std::sin(200.0 * q)});
  }
  const auto peaks = find_peaks(ripple, 1e-3);
  CHECK(peaks.size() == 1);
  CHECK(peaks[0].q == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("find_peaks positions are invariant under uniform rescaling") {
  std::vector<SlicePoint> slice;
  for (int i = 0; i < 2000; ++i) {
    const double q = double(i) / 1999.0;
    slice.push_back({q, 1.0 + std::cos(40.0 * q)});
  }
  const auto a = find_peaks(slice, 1e-3);
  for (auto& p : slice) p.f *= 17.3;
  const auto b = find_peaks(slice, 1e-3);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].q == doctest::Approx(b[i].q).epsilon(1e-12));
    CHECK(b[i].prominence == doctest::Approx(17.3 * a[i].prominence).epsilon(1e-12));
  }
}

TEST_CASE("angular profile of a constant grid is constant") {
  const auto spec = make_synthetic([](double, double) { return 0.7; }, 64, 1.0);
  for (double v : angular_profile(spec, 0.5, 64)) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("angular profile of a zero grid is zero") {
  const auto spec = make_synthetic([](double, double) { return 0.0; }, 32, 1.0);
  for (double v : angular_profile(spec, 0.5, 64)) CHECK(v == 0.0);
}

TEST_CASE("angular profile matches the synthetic envelope to 1e-3") {
  // short delay keeps the radial fringes wide enough for bilinear sampling
  const SpiralPrediction p{10.0, 4, 1, -1};
  const auto spec = make_synthetic(
      [&](double x, double y) { return envelope(std::hypot(x, y), std::atan2(y, x), p); }, 512,
      1.2);
  const double r = 0.6;
  const auto prof = angular_profile(spec, r, 256);
  for (int j = 0; j < 256; ++j) {
    const double phi = 2.0 * kPi * double(j) / 256.0;
    CHECK(std::fabs(prof[j] - envelope(r, phi, p)) < 1e-3);
  }
}

TEST_CASE("angular profile rejects circles outside the grid") {
  const auto spec = make_synthetic([](double, double) { return 1.0; }, 32, 1.0);
  CHECK_THROWS_AS(angular_profile(spec, 1.5, 64), AnalysisError);
}

TEST_CASE("arm count and chirality on synthetic envelopes") {
  const std::vector<double> radii = {0.5, 0.55, 0.6, 0.65, 0.7};

  const auto lrcp = make_vortex({100.0, 4, 1, -1});
  const ArmCount a = arm_count_and_chirality(lrcp, radii);
  CHECK(a.dominant == 8);
  CHECK(a.chirality == Chirality::counterclockwise);
  CHECK(a.dominant_amp > 5.0 * a.second_amp);

  const auto rlcp = make_vortex({100.0, 4, -1, 1});
  const ArmCount b = arm_count_and_chirality(rlcp, radii);
  CHECK(b.dominant == 8);
  CHECK(b.chirality == Chirality::clockwise);

  // equal handedness: the envelope loses its phi dependence entirely
  const auto rings = make_vortex({100.0, 4, 1, 1});
  const ArmCount c = arm_count_and_chirality(rings, radii);
  CHECK(c.dominant == 0);
  CHECK(c.chirality == Chirality::none);
}

TEST_CASE("arm count equals 2 ell for ell = 1..6, both handedness orders") {
  const std::vector<double> radii = {0.55, 0.6, 0.65};
  for (int ell = 1; ell <= 6; ++ell) {
    const auto ccw = make_vortex({60.0, ell, 1, -1}, 768);
    const ArmCount a = arm_count_and_chirality(ccw, radii);
    CHECK(a.dominant == 2 * ell);
    CHECK(a.chirality == Chirality::counterclockwise);

    const auto cw = make_vortex({60.0, ell, -1, 1}, 768);
    const ArmCount b = arm_count_and_chirality(cw, radii);
    CHECK(b.dominant == 2 * ell);
    CHECK(b.chirality == Chirality::clockwise);
  }
}

TEST_CASE("rotation estimate: identity, synthetic rotation, symmetric tie-break") {
  auto pattern = [](double x, double y) {
    const double r = std::hypot(x, y);
    const double phi = std::atan2(y, x);
    return (1.0 + 0.6 * std::cos(phi - 0.3) + 0.3 * std::cos(3.0 * phi)) * ring_window(r);
  };
  const auto a = make_synthetic(pattern, 256, 1.2);
  CHECK(estimate_rotation(a, a, 0.6) == doctest::Approx(0.0).scale(1.0));

  const double alpha = kPi / 3.0;
  const auto b = make_synthetic(
      [&](double x, double y) {
        // sample the pattern rotated by +alpha (counterclockwise)
        const double c = std::cos(-alpha), s = std::sin(-alpha);
        return pattern(c * x - s * y, s * x + c * y);
      },
      256, 1.2);
  CHECK(std::fabs(estimate_rotation(a, b, 0.6) - alpha) <= 2.0 * kPi / 256.0);

  // two-fold symmetric pattern rotated by -pi/4: the antipodal maximum at
  // +3 pi/4 must lose the tie to the smaller angle
  auto dumbbell = [](double x, double y) {
    const double r = std::hypot(x, y);
    return (1.0 + std::cos(2.0 * std::atan2(y, x))) * ring_window(r);
  };
  const auto c2 = make_synthetic(dumbbell, 256, 1.2);
  const double beta = -kPi / 4.0;
  const auto c2rot = make_synthetic(
      [&](double x, double y) {
        const double c = std::cos(-beta), s = std::sin(-beta);
        return dumbbell(c * x - s * y, s * x + c * y);
      },
      256, 1.2);
  CHECK(estimate_rotation(c2, c2rot, 0.6) == doctest::Approx(beta).epsilon(0.02));
}

TEST_CASE("rotation estimate rejects flat profiles") {
  const auto flat = make_synthetic([](double, double) { return 1.0; }, 64, 1.0);
  CHECK_THROWS_AS(estimate_rotation(flat, flat, 0.5), AnalysisError);
}

TEST_CASE("ring support brackets a synthetic ring") {
  const auto spec = make_synthetic(
      [](double x, double y) { return ring_window(std::hypot(x, y)); }, 512, 1.2);
  const RingSupport s = ring_support(spec);
  // 1% threshold of a Gaussian ring: r = 0.64 +- 0.18 sqrt(ln 100)
  const double half_width = 0.18 * std::sqrt(std::log(100.0));
  CHECK(s.q_in == doctest::Approx(0.64 - half_width).epsilon(0.05));
  CHECK(s.q_out == doctest::Approx(0.64 + half_width).epsilon(0.05));
  CHECK(s.max_f == doctest::Approx(1.0).epsilon(0.01));

  const auto radii = default_radii(spec, 5);
  REQUIRE(radii.size() == 5);
  CHECK(radii.front() == doctest::Approx(s.q_in));
  CHECK(radii.back() == doctest::Approx(s.q_out));
}

TEST_CASE("measured pitch matches the closed-form pitch on a synthetic vortex") {
  const SpiralPrediction p{100.0, 4, 1, -1};
  const auto spec = make_vortex(p, 1024);
  const auto m = measure_pitch(spec, 0.6);
  REQUIRE(m.has_value());
  CHECK(m->harmonic == 8);
  CHECK(m->pitch == doctest::Approx(spiral_pitch(0.6, p)).epsilon(0.01));
  CHECK(m->phase_slope < 0.0);  // counterclockwise winding

  // rings have no measurable pitch
  const auto rings = make_vortex({100.0, 4, 1, 1}, 512);
  CHECK_FALSE(measure_pitch(rings, 0.6).has_value());
}

TEST_CASE("fringe comparison report on a fast coarse slice") {
  FieldConfig cfg;
  cfg.T_delay = 100.0;
  SolverSettings set;
  set.rel_tol = 1e-5;
  set.abs_tol = 1e-7;
  SliceSpec slice;
  slice.n = 500;
  const Table1Report rep = table1_report(cfg, set, slice);
  REQUIRE(rep.rows.size() == 11);
  CHECK(rep.all_diffs_positive);
  CHECK(rep.rows.front().k == 33);
  CHECK(rep.rows.front().q_num == doctest::Approx(0.26157).epsilon(0.01));
  CHECK(rep.rows.back().k == 43);
  for (const auto& r : rep.rows) {
    CHECK(r.diff > 0.0);
    CHECK(r.diff < 0.02);
  }
}

TEST_CASE("fringe comparison rejects co-rotating mismatch and zero delay") {
  FieldConfig counter;
  counter.delta2 = -1;
  counter.T_delay = 100.0;
  CHECK_THROWS_AS(table1_report(counter, {}, {}), AnalysisError);
  FieldConfig no_delay;
  CHECK_THROWS_AS(table1_report(no_delay, {}, {}), AnalysisError);
}

TEST_CASE("peak-count mismatch lists the peaks it found") {
  FieldConfig cfg;
  cfg.T_delay = 100.0;
  SolverSettings set;
  set.rel_tol = 1e-5;
  set.abs_tol = 1e-7;
  SliceSpec slice;
  slice.n = 200;
  try {
    table1_report(cfg, set, slice, 33, 45);  // 13 fringe indices, 11 peaks
    FAIL("expected AnalysisError");
  } catch (const AnalysisError& e) {
    CHECK(std::string(e.what()).find("peaks at:") != std::string::npos);
  }
}

TEST_CASE("bundled reference table is well formed") {
  const auto ref = reference_fringes();
  REQUIRE(ref.size() == 11);
  CHECK(ref.front().k == 33);
  CHECK(ref.back().k == 43);
  for (const auto& r : ref) {
    CHECK(r.q_eva > r.q_num);  // systematic positive offset
    CHECK(r.q_eva - r.q_num >= 0.002);
    CHECK(r.q_eva - r.q_num <= 0.015);
    // q_eva column is reproduced by the fringe formula at 5 decimals
    const auto q = ramsey_peak(100.0, r.k);
    REQUIRE(q.has_value());
    CHECK(std::fabs(*q - r.q_eva) < 1e-5);
  }
}

TEST_CASE("analysis report text carries the headline numbers") {
  const auto spec = make_vortex({100.0, 4, 1, -1});
  const AnalysisReport rep = analyze_spectrum(spec, nullptr, 0.6);
  const std::string text = to_text(rep);
  CHECK(text.find("dominant_harmonic = 8") != std::string::npos);
  CHECK(text.find("chirality = counterclockwise") != std::string::npos);
  CHECK(text.find("pitch") != std::string::npos);
}
