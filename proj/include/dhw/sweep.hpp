#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dhw/wigner.hpp"

namespace dhw {

// Uniform momentum grid in the polarization plane at fixed qz.
struct GridSpec {
  double qx_min = -1.2;
  double qx_max = 1.2;
  int nx = 256;
  double qy_min = -1.2;
  double qy_max = 1.2;
  int ny = 256;
  double qz = 0.0;

  double qx(int i) const { return qx_min + (qx_max - qx_min) * double(i) / double(nx - 1); }
  double qy(int j) const { return qy_min + (qy_max - qy_min) * double(j) / double(ny - 1); }
  double dx() const { return (qx_max - qx_min) / double(nx - 1); }
  double dy() const { return (qy_max - qy_min) / double(ny - 1); }

  void validate() const;  // throws ConfigError
};

struct Provenance {
  std::string code_version;
  std::string timestamp;  // kept out of the CSV payload so outputs stay reproducible
};

// Final distribution values over a grid, with everything needed to rerun it.
struct SpectrumGrid {
  FieldConfig field;
  GridSpec grid;
  SolverSettings solver;
  Provenance prov;
  std::vector<double> values;  // row-major, values[i * ny + j]

  double at(int i, int j) const { return values[size_t(i) * grid.ny + j]; }
  double& at(int i, int j) { return values[size_t(i) * grid.ny + j]; }

  // Bilinear interpolation at an arbitrary in-range point.
  double interpolate(double qx, double qy) const;
  bool contains(double qx, double qy) const;
};

// Maps solve_single over the grid. jobs = 0 uses all available threads.
// Per-node failures abort the sweep with the node coordinates attached.
// Results are bitwise independent of the worker count.
SpectrumGrid compute_spectrum(const FieldConfig& cfg, const GridSpec& grid,
                              const SolverSettings& set, int jobs = 0);

// Plain serial loop, kept as the reference the parallel kernel is tested
// and benchmarked against.
SpectrumGrid compute_spectrum_serial(const FieldConfig& cfg, const GridSpec& grid,
                                     const SolverSettings& set);

enum class Axis { qx, qy, qz };

// 1D scan along a coordinate axis; the other two coordinates are held at the
// base point values (the scanned axis entry of the base point is ignored).
struct SliceSpec {
  Axis axis = Axis::qx;
  double q_min = 0.2;
  double q_max = 0.95;
  int n = 2000;
  Momentum base;

  Momentum point(double q) const;
  void validate() const;
};

struct SlicePoint {
  double q;
  double f;
};

std::vector<SlicePoint> compute_slice_1d(const FieldConfig& cfg, const SliceSpec& slice,
                                         const SolverSettings& set, int jobs = 0);

// Trapezoidal integral of f over the grid divided by (2 pi)^2, negative
// values clamped to zero. support_ok is false when the grid boundary still
// carries more than boundary_frac of the maximum (truncated support).
struct Density2D {
  double value = 0.0;
  bool support_ok = true;
  double boundary_max = 0.0;
  double max_f = 0.0;
};

Density2D density_2d(const SpectrumGrid& spec, double boundary_frac = 1e-3);

// Coarse full-momentum integration of Eq-of-motion output over a symmetric box.
struct Grid3Spec {
  double extent = 1.2;  // box is [-extent, extent]^3
  int n = 64;           // nodes per axis

  void validate() const;
};

// d^3q/(2 pi)^3 integral of f; f_override (when set) replaces the ODE solve,
// which is how synthetic integrands are injected in tests.
double density_3d(const FieldConfig& cfg, const Grid3Spec& grid3, const SolverSettings& set,
                  int jobs = 0,
                  const std::function<double(double, double, double)>& f_override = {});

}  // namespace dhw
