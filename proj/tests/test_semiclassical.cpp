#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dhw/semiclassical.hpp"

using namespace dhw;

namespace {
constexpr double kPi = std::numbers::pi;

SpiralPrediction lrcp(double T = 100.0, int ell = 4) { return {T, ell, 1, -1}; }
SpiralPrediction rlcp(double T = 100.0, int ell = 4) { return {T, ell, -1, 1}; }
}  // namespace

TEST_CASE("theta0") {
  CHECK(theta0(0.0, 100.0) == doctest::Approx(200.0).epsilon(1e-14));
  CHECK(theta0(0.6, 100.0) == doctest::Approx(233.238075793812).epsilon(1e-12));
  for (double q : {0.0, 0.3, 1.7}) CHECK(theta0(q, 0.0) == 0.0);
}

TEST_CASE("ramsey peaks: values and sub-threshold indices") {
  auto q33 = ramsey_peak(100.0, 33);
  REQUIRE(q33.has_value());
  CHECK(*q33 == doctest::Approx(0.273495739050230).epsilon(1e-12));
  CHECK(std::fabs(*q33 - 0.27350) < 1e-5);  // five-decimal reference value

  auto q43 = ramsey_peak(100.0, 43);
  REQUIRE(q43.has_value());
  CHECK(*q43 == doctest::Approx(0.908234470696539).epsilon(1e-12));
  CHECK(std::fabs(*q43 - 0.90823) < 1e-5);

  CHECK_FALSE(ramsey_peak(100.0, 31).has_value());  // 31 pi / 100 < 1
  CHECK_FALSE(ramsey_peak(100.0, 0).has_value());
  CHECK_FALSE(ramsey_peak(100.0, -5).has_value());
}

TEST_CASE("fringe enumeration inside a window") {
  const auto ks = ramsey_peaks_in_window(100.0, 0.2, 0.95);
  REQUIRE(ks.size() == 11);
  CHECK(ks.front().first == 33);
  CHECK(ks.back().first == 43);
  for (const auto& [k, q] : ks) {
    CHECK(q >= 0.2);
    CHECK(q <= 0.95);
  }
}

TEST_CASE("equal handedness reduces the spiral to rings") {
  const SpiralPrediction rings{100.0, 4, 1, 1};
  for (int k : {33, 36, 43}) {
    for (double phi : {0.0, 0.9, 3.7, 6.0}) {
      const auto qs = spiral_radius(phi, k, rings);
      const auto qr = ramsey_peak(100.0, k);
      REQUIRE(qs.has_value());
      REQUIRE(qr.has_value());
      CHECK(*qs == doctest::Approx(*qr).epsilon(1e-14));
    }
  }
}

TEST_CASE("spiral radius grows with azimuth for counter-rotating pulses") {
  const auto q0 = spiral_radius(0.0, 32, lrcp());
  REQUIRE(q0.has_value());
  CHECK(*q0 == doctest::Approx(0.103186678750459).epsilon(1e-12));

  const auto q1 = spiral_radius(kPi / 8.0, 32, lrcp());
  REQUIRE(q1.has_value());
  CHECK(*q1 == doctest::Approx(0.206099405300121).epsilon(1e-12));
  CHECK(*q1 > *q0);  // radius grows counterclockwise

  // opposite handedness order: radius shrinks with phi and the arm
  // eventually drops below threshold entirely
  const auto r0 = spiral_radius(0.0, 32, rlcp());
  const auto r1 = spiral_radius(0.05, 32, rlcp());
  REQUIRE(r0.has_value());
  REQUIRE(r1.has_value());
  CHECK(*r1 < *r0);
  CHECK_FALSE(spiral_radius(kPi / 16.0, 32, rlcp()).has_value());
}

TEST_CASE("spiral radius is empty below threshold") {
  CHECK_FALSE(spiral_radius(0.0, 5, lrcp()).has_value());  // |bracket|/2T < 1
}

TEST_CASE("spiral pitch") {
  CHECK(spiral_pitch(0.6, lrcp()) == doctest::Approx(12.862393885688).epsilon(1e-12));
  // vanishes linearly as q -> 0: pitch ~ (2T / |S|) q
  CHECK(spiral_pitch(1e-6, lrcp()) == doctest::Approx(25.0e-6).epsilon(1e-6));
  CHECK(spiral_pitch(0.6, lrcp(200.0)) ==
        doctest::Approx(2.0 * spiral_pitch(0.6, lrcp(100.0))).epsilon(1e-14));
  CHECK_THROWS_AS(spiral_pitch(0.6, SpiralPrediction{100.0, 4, 1, 1}), DomainError);
}

TEST_CASE("spiral pitch equals the numerical derivative of the arm curve") {
  const SpiralPrediction p = lrcp();
  const int kprime = 36;
  for (double phi : {0.3, 1.1, 2.4}) {
    const double h = 1e-5;
    const auto qm = spiral_radius(phi - h, kprime, p);
    const auto q0 = spiral_radius(phi, kprime, p);
    const auto qp = spiral_radius(phi + h, kprime, p);
    REQUIRE(q0.has_value());
    const double dq_dphi = (*qp - *qm) / (2.0 * h);
    const double pitch = spiral_pitch(*q0, p);
    CHECK(pitch == doctest::Approx(1.0 / std::fabs(dq_dphi)).epsilon(1e-6));
  }
}

TEST_CASE("envelope bounds and arm count on a circle") {
  const SpiralPrediction p = lrcp();
  // maxima where the cosine argument is a multiple of 2 pi
  const double q = 0.6;
  const double th = theta0(q, p.T);
  const double S = double(p.handedness_diff()) * p.ell;  // -8
  const double phi_max = (2.0 * kPi * 40.0 - th) / S;    // solves th + S phi = 80 pi
  CHECK(envelope(q, phi_max, p) == doctest::Approx(2.0).epsilon(1e-9));
  const double phi_node = (2.0 * kPi * 40.0 + kPi - th) / S;
  CHECK(envelope(q, phi_node, p) == doctest::Approx(0.0).scale(1.0));

  // exactly |delta2 - delta1| * ell maxima around the circle
  const int n = 4096;
  int maxima = 0;
  double prev = envelope(q, -2.0 * kPi / n, p);
  double cur = envelope(q, 0.0, p);
  for (int j = 0; j < n; ++j) {
    const double next = envelope(q, 2.0 * kPi * double(j + 1) / n, p);
    if (cur > prev && cur > next) ++maxima;
    prev = cur;
    cur = next;
  }
  CHECK(maxima == 8);
}

TEST_CASE("envelope maxima along a ray coincide with spiral arm radii") {
  const SpiralPrediction p = lrcp();
  const double phi = 0.7;
  const int n = 200000;
  const double q_lo = 0.05, q_hi = 1.2;
  const auto kprimes = spiral_kprimes_in_window(p, q_lo, q_hi);
  for (int i = 1; i + 1 < n; ++i) {
    const double qm = q_lo + (q_hi - q_lo) * double(i - 1) / double(n - 1);
    const double q0 = q_lo + (q_hi - q_lo) * double(i) / double(n - 1);
    const double qp = q_lo + (q_hi - q_lo) * double(i + 1) / double(n - 1);
    const double em = envelope(qm, phi, p);
    const double e0 = envelope(q0, phi, p);
    const double ep = envelope(qp, phi, p);
    if (!(e0 > em && e0 > ep)) continue;
    double best = 1e9;
    for (int kp : kprimes) {
      if (auto q = spiral_radius(phi, kp, p)) best = std::min(best, std::fabs(*q - q0));
    }
    CHECK(best < 1e-4);  // grid resolution limited
  }
}

TEST_CASE("rotation angle convention") {
  CHECK(rotation_angle(kPi / 2.0, -1) == doctest::Approx(-kPi / 4.0));
  CHECK(rotation_angle(0.0, -1) == 0.0);
  CHECK(rotation_angle(kPi / 2.0, 1) == doctest::Approx(kPi / 4.0));
}

TEST_CASE("photon number") {
  CHECK(photon_number(0.6, 1.0) == 4);
  CHECK(photon_number(2.1, 1.0) == 1);
  CHECK(photon_number(2.0, 1.0) == 1);  // exact threshold
  CHECK(photon_number(0.6, effective_mass(0.1, 0.6)) == 4);
}

TEST_CASE("effective mass and ring radius") {
  const double m_star = effective_mass(0.1, 0.6);
  CHECK(m_star == doctest::Approx(1.013793755050).epsilon(1e-12));
  CHECK(ring_radius(4, 0.6, m_star) == doctest::Approx(0.642045342809).epsilon(1e-12));
  CHECK(std::fabs(ring_radius(4, 0.6, m_star) - 0.642) < 1e-4);
  CHECK_THROWS_AS(ring_radius(3, 0.6, 1.0), DomainError);  // 1.8 < 2 m
}

TEST_CASE("spiral arm enumeration covers the window") {
  const SpiralPrediction p = lrcp();
  const auto kprimes = spiral_kprimes_in_window(p, 0.0, 1.2);
  CHECK(kprimes.size() >= 4);
  // every enumerated arm really enters the window
  for (int kp : kprimes) {
    bool inside = false;
    for (int s = 0; s < 512 && !inside; ++s) {
      const double phi = 2.0 * kPi * double(s) / 512.0;
      if (auto q = spiral_radius(phi, kp, p); q && *q <= 1.2) inside = true;
    }
    CHECK(inside);
  }
}
