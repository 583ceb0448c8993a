#include "dhw/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dhw {

namespace {
constexpr double kPi = std::numbers::pi;
}

double theta0(double q, double T) { return 2.0 * std::sqrt(q * q + 1.0) * T; }

std::optional<double> ramsey_peak(double T, int k) {
  const double x = double(k) * kPi / T;
  if (!(x >= 1.0)) return std::nullopt;  // sub-threshold, imaginary root
  return std::sqrt(x * x - 1.0);
}

std::vector<std::pair<int, double>> ramsey_peaks_in_window(double T, double q_lo, double q_hi) {
  std::vector<std::pair<int, double>> out;
  if (!(T > 0.0) || !(q_hi > q_lo)) return out;
  const double lo = std::max(q_lo, 0.0);
  const int k_lo = int(std::ceil(T * std::sqrt(1.0 + lo * lo) / kPi - 1e-9));
  const int k_hi = int(std::floor(T * std::sqrt(1.0 + q_hi * q_hi) / kPi + 1e-9));
  for (int k = std::max(1, k_lo); k <= k_hi; ++k) {
    if (auto q = ramsey_peak(T, k); q && *q >= lo - 1e-12 && *q <= q_hi + 1e-12)
      out.emplace_back(k, *q);
  }
  return out;
}

std::optional<double> spiral_radius(double phi, int kprime, const SpiralPrediction& p) {
  const double bracket = 2.0 * double(kprime) * kPi - double(p.handedness_diff()) * p.ell * phi;
  const double x = bracket / (2.0 * p.T);
  const double radicand = x * x - 1.0;
  if (!(radicand >= 0.0)) return std::nullopt;
  return std::sqrt(radicand);
}

std::vector<int> spiral_kprimes_in_window(const SpiralPrediction& p, double q_lo, double q_hi) {
  std::vector<int> out;
  if (!(p.T > 0.0) || !(q_hi > q_lo)) return out;
  const double lo = std::max(q_lo, 0.0);
  // |bracket| / 2T must land in [sqrt(1+q_lo^2), sqrt(1+q_hi^2)] for some
  // phi in [0, 2 pi); the bracket sweeps an interval of width 2 pi |S| ell.
  const double blo = 2.0 * p.T * std::sqrt(1.0 + lo * lo);
  const double bhi = 2.0 * p.T * std::sqrt(1.0 + q_hi * q_hi);
  const double sweep = 2.0 * kPi * double(std::abs(p.handedness_diff())) * p.ell;
  const int k_span = int(std::ceil((bhi + sweep) / (2.0 * kPi))) + 1;
  for (int k = -k_span; k <= k_span; ++k) {
    const double b0 = 2.0 * double(k) * kPi;
    const double b1 = b0 - double(p.handedness_diff()) * p.ell * 2.0 * kPi;
    const double bmin = std::min(b0, b1);
    const double bmax = std::max(b0, b1);
    // intersect [bmin, bmax] with +-[blo, bhi]
    const bool hits = (bmax >= blo && bmin <= bhi) || (bmax >= -bhi && bmin <= -blo);
    if (hits) out.push_back(k);
  }
  return out;
}

double spiral_pitch(double q, const SpiralPrediction& p) {
  if (p.delta1 == p.delta2)
    throw DomainError("spiral_pitch undefined for equal handedness (rings)");
  const double scale = std::fabs(2.0 * p.T / (double(p.handedness_diff()) * p.ell));
  return scale * q / std::sqrt(q * q + 1.0);
}

double envelope(double q, double phi, const SpiralPrediction& p) {
  return 1.0 + std::cos(theta0(q, p.T) + double(p.handedness_diff()) * p.ell * phi);
}

double rotation_angle(double dphi, int delta2) { return double(delta2) * dphi / 2.0; }

int photon_number(double omega, double m_star) {
  // smallest ell with ell * omega >= 2 m_star; the epsilon absorbs FP dust
  // when the ratio is an exact integer
  return std::max(1, int(std::ceil(2.0 * m_star / omega - 1e-12)));
}

double effective_mass(double E1, double omega) {
  return std::sqrt(1.0 + (E1 * E1) / (omega * omega));
}

double ring_radius(int ell, double omega, double m_star) {
  const double half_energy = 0.5 * double(ell) * omega;
  const double radicand = half_energy * half_energy - m_star * m_star;
  if (!(radicand >= 0.0))
    throw DomainError("ring_radius: ell photons are below the pair threshold");
  return std::sqrt(radicand);
}

}  // namespace dhw
