#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dhw/semiclassical.hpp"
#include "dhw/sweep.hpp"

namespace dhw {

struct Peak {
  double q;           // position after 3-point quadratic refinement
  double f;           // refined height
  double prominence;  // topographic prominence on the raw samples
};

// Interior local maxima of a 1D slice with prominence above
// min_prominence_frac * max(f). Throws AnalysisError for slices shorter
// than 5 samples or non-ascending q.
std::vector<Peak> find_peaks(std::span<const SlicePoint> slice, double min_prominence_frac);

// f sampled on the circle |q| = radius, n uniform azimuth samples starting
// at phi = 0, bilinear interpolation. Throws AnalysisError when the circle
// leaves the grid.
std::vector<double> angular_profile(const SpectrumGrid& spec, double radius, int n_samples = 256);

// Complex angular Fourier amplitudes c_k = (1/n) sum_j f_j exp(-i k phi_j)
// for k = 0 .. k_max.
std::vector<std::complex<double>> angular_harmonics(std::span<const double> profile, int k_max);

enum class Chirality { counterclockwise, clockwise, none };

const char* to_string(Chirality c);

struct ArmCount {
  int dominant = 0;          // 0 when no non-DC harmonic clears the threshold
  Chirality chirality = Chirality::none;
  double dominant_amp = 0.0; // mean |c_dominant| over the radii
  double second_amp = 0.0;   // next-largest non-DC amplitude
  double dc_amp = 0.0;       // mean |c_0|
  double phase_slope = 0.0;  // d arg(c_dominant) / dq across the radii
};

// Dominant angular harmonic over several ring radii and the winding sense of
// its phase. The chirality mapping (negative phase slope = pattern advances
// counterclockwise with growing q) is calibrated once on synthetic envelopes
// and frozen. Harmonics below 5% of DC mean ring-like spectra: chirality none.
ArmCount arm_count_and_chirality(const SpectrumGrid& spec, std::span<const double> radii,
                                 int n_samples = 256);

// Rigid rotation of spectrum B relative to A on the circle |q| = radius, by
// circular cross-correlation of the angular profiles with sub-sample
// refinement. Positive = counterclockwise, result in (-pi, pi]. Near-ties
// (symmetric profiles) resolve to the smallest |angle|. Throws AnalysisError
// on flat profiles.
double estimate_rotation(const SpectrumGrid& a, const SpectrumGrid& b, double radius,
                         int n_samples = 256);

// Radial support [q_in, q_out] of the pattern: where the azimuthal maximum of
// f exceeds frac * max(f).
struct RingSupport {
  double q_in = 0.0;
  double q_out = 0.0;
  double max_f = 0.0;
};

RingSupport ring_support(const SpectrumGrid& spec, double frac = 1e-2, int n_radial = 400,
                         int n_samples = 256);

// count radii uniformly spanning the ring support.
std::vector<double> default_radii(const SpectrumGrid& spec, int count = 5);

// count radii across the core of the ring: the contiguous region around the
// maximum of the azimuth-averaged radial profile that stays above frac of it.
// For vortex spectra the azimuthal mean is the smooth ring envelope, so this
// picks the crest where the arm pattern carries its weight, away from the
// faint support edges.
std::vector<double> ring_core_radii(const SpectrumGrid& spec, double frac = 0.5,
                                    int count = 5);

struct PitchMeasurement {
  double pitch = 0.0;        // |d phi / d q| of the fringes at q_center
  int harmonic = 0;          // harmonic the phase slope was read from
  double phase_slope = 0.0;  // d arg(c_k) / dq
};

// Fringe pitch measured from the dominant harmonic's phase drift across
// radii q_center +- half_span. Empty when no harmonic clears the threshold.
std::optional<PitchMeasurement> measure_pitch(const SpectrumGrid& spec, double q_center,
                                              double half_span = 0.05, int n_radii = 11,
                                              int n_samples = 256);

struct Table1Row {
  int k;         // fringe index
  double q_num;  // simulated peak position
  double q_eva;  // stationary-phase estimate for the same k
  double diff;   // q_eva - q_num
};

struct Table1Report {
  std::vector<Table1Row> rows;
  bool all_diffs_positive = false;
};

// Simulates the on-axis slice for a co-rotating two-pulse field, finds the
// fringe peaks and pairs them with the ramsey_peak estimates. k_min = k_max = 0
// enumerates every fringe inside the slice window. Throws AnalysisError when
// the peak count does not match the fringe count (the found peaks are listed).
Table1Report table1_report(const FieldConfig& cfg, const SolverSettings& set,
                           const SliceSpec& slice = {}, int k_min = 0, int k_max = 0,
                           double min_prominence_frac = 1e-3, int jobs = 0);

// Bundled comparison data for the co-rotating T = 100, E1 = E2 = 0.1 run:
// the eleven on-axis fringe peaks and their stationary-phase estimates.
struct ReferenceFringe {
  int k;
  double q_num;
  double q_eva;
};

std::span<const ReferenceFringe> reference_fringes();

// Everything the analyze command reports for one spectrum.
struct AnalysisReport {
  std::vector<Peak> radial_peaks;  // peaks of the azimuth-averaged radial profile
  std::vector<std::complex<double>> harmonics;
  int dominant_harmonic = 0;
  Chirality chirality = Chirality::none;
  double rotation_estimate = 0.0;  // vs. a second spectrum; 0 when absent
  bool has_rotation = false;
  std::vector<Table1Row> table1_rows;
  RingSupport support;
  std::vector<double> radii;
  Density2D density;
  std::optional<PitchMeasurement> pitch;
  double pitch_q = 0.0;
};

AnalysisReport analyze_spectrum(const SpectrumGrid& spec, const SpectrumGrid* reference = nullptr,
                                double pitch_q = 0.0, int n_radii = 5, int n_samples = 256);

std::string to_text(const AnalysisReport& report);

}  // namespace dhw
