#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dhw/errors.hpp"

namespace dhw {

// Parameters of the stationary-phase interference model for two pulses:
// delay T, absorbed photon number ell, handedness of each pulse.
struct SpiralPrediction {
  double T = 100.0;
  int ell = 4;
  int delta1 = 1;
  int delta2 = -1;

  int handedness_diff() const { return delta2 - delta1; }
};

// Phase accumulated between two well-separated pulses, 2 sqrt(q^2 + 1) T.
double theta0(double q, double T);

// Radial fringe position sqrt((k pi / T)^2 - 1); empty below threshold.
std::optional<double> ramsey_peak(double T, int k);

// All k whose fringe lands inside [q_lo, q_hi], with the fringe radii.
std::vector<std::pair<int, double>> ramsey_peaks_in_window(double T, double q_lo, double q_hi);

// Fringe-maximum radius of arm k' at azimuth phi,
// sqrt(([2 k' pi - (delta2 - delta1) ell phi] / 2T)^2 - 1); empty when the
// radicand is negative. Equal pulse handedness reduces this to ramsey_peak.
std::optional<double> spiral_radius(double phi, int kprime, const SpiralPrediction& p);

// All k' whose arm enters [q_lo, q_hi] for some phi in [0, 2 pi).
std::vector<int> spiral_kprimes_in_window(const SpiralPrediction& p, double q_lo, double q_hi);

// |d phi / d q| along a fringe, |2T / ((delta2 - delta1) ell)| * q / sqrt(q^2 + 1).
// Throws DomainError for equal handedness (rings have no pitch).
double spiral_pitch(double q, const SpiralPrediction& p);

// Unnormalized interference shape 1 + cos(theta0(q, T) + (delta2 - delta1) ell phi),
// in [0, 2]. The slow amplitude envelope is not modeled, so only fringe
// positions, counts and pitch are comparable with simulation.
double envelope(double q, double phi, const SpiralPrediction& p);

// Rotation of the momentum spectrum under a relative carrier envelope phase:
// delta2 * dphi / 2, negative = clockwise.
double rotation_angle(double dphi, int delta2);

// Smallest photon number ell with ell * omega >= 2 * m_star.
int photon_number(double omega, double m_star);

// Field-dressed mass convention used for ring-radius estimates,
// sqrt(1 + E1^2 / omega^2) for a circular pulse of amplitude E1.
double effective_mass(double E1, double omega);

// Multiphoton ring radius sqrt((ell * omega / 2)^2 - m_star^2).
// Throws DomainError when ell * omega is below the pair threshold.
double ring_radius(int ell, double omega, double m_star);

}  // namespace dhw
