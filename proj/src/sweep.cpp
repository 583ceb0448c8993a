#include "dhw/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <mutex>
#include <numbers>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dhw/errors.hpp"
#include "dhw/version.hpp"

namespace dhw {

namespace {

Provenance make_provenance() {
  Provenance p;
  p.code_version = kVersion;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  p.timestamp = buf;
  return p;
}

int resolve_jobs(int jobs) {
#ifdef _OPENMP
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

// Records the first per-node failure seen by any worker; the sweep is
// aborted and rethrown with the node attached.
struct FailureLatch {
  std::atomic<bool> failed{false};
  std::mutex mu;
  int i = 0, j = 0;
  double qx = 0, qy = 0, qz = 0;
  std::string message;

  void record(int i_, int j_, const Momentum& q, const char* what) {
    bool expected = false;
    if (failed.compare_exchange_strong(expected, true)) {
      std::lock_guard<std::mutex> lock(mu);
      i = i_;
      j = j_;
      qx = q.qx;
      qy = q.qy;
      qz = q.qz;
      message = what;
    }
  }

  [[noreturn]] void rethrow() const {
    throw SweepError(i, j, qx, qy, qz,
                     "sweep node (" + std::to_string(i) + "," + std::to_string(j) + ") q=(" +
                         std::to_string(qx) + "," + std::to_string(qy) + "," +
                         std::to_string(qz) + "): " + message);
  }
};

}  // namespace

void GridSpec::validate() const {
  if (nx < 2 || ny < 2) throw ConfigError("grid config: nx and ny must be >= 2");
  if (!(qx_max > qx_min) || !(qy_max > qy_min))
    throw ConfigError("grid config: max must exceed min");
  if (!std::isfinite(qx_min) || !std::isfinite(qx_max) || !std::isfinite(qy_min) ||
      !std::isfinite(qy_max) || !std::isfinite(qz))
    throw ConfigError("grid config: non-finite bound");
}

bool SpectrumGrid::contains(double x, double y) const {
  return x >= grid.qx_min && x <= grid.qx_max && y >= grid.qy_min && y <= grid.qy_max;
}

double SpectrumGrid::interpolate(double x, double y) const {
  const double fx = (x - grid.qx_min) / grid.dx();
  const double fy = (y - grid.qy_min) / grid.dy();
  int i = int(std::floor(fx));
  int j = int(std::floor(fy));
  i = std::max(0, std::min(grid.nx - 2, i));
  j = std::max(0, std::min(grid.ny - 2, j));
  const double u = fx - i;
  const double v = fy - j;
  return (1.0 - u) * (1.0 - v) * at(i, j) + u * (1.0 - v) * at(i + 1, j) +
         (1.0 - u) * v * at(i, j + 1) + u * v * at(i + 1, j + 1);
}

SpectrumGrid compute_spectrum(const FieldConfig& cfg, const GridSpec& grid,
                              const SolverSettings& set, int jobs) {
  cfg.validate();
  grid.validate();
  set.validate();

  SpectrumGrid out;
  out.field = cfg;
  out.grid = grid;
  out.solver = set;
  out.prov = make_provenance();
  out.values.assign(size_t(grid.nx) * grid.ny, 0.0);

  FailureLatch latch;
  const int n_threads = resolve_jobs(jobs);
  (void)n_threads;

#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(dynamic, 8) num_threads(n_threads)
#endif
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      if (latch.failed.load(std::memory_order_relaxed)) continue;
      const Momentum q{grid.qx(i), grid.qy(j), grid.qz};
      try {
        out.values[size_t(i) * grid.ny + j] = solve_single(cfg, q, set).f;
      } catch (const std::exception& e) {
        latch.record(i, j, q, e.what());
      }
    }
  }

  if (latch.failed.load()) latch.rethrow();
  return out;
}

SpectrumGrid compute_spectrum_serial(const FieldConfig& cfg, const GridSpec& grid,
                                     const SolverSettings& set) {
  cfg.validate();
  grid.validate();
  set.validate();

  SpectrumGrid out;
  out.field = cfg;
  out.grid = grid;
  out.solver = set;
  out.prov = make_provenance();
  out.values.assign(size_t(grid.nx) * grid.ny, 0.0);

  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const Momentum q{grid.qx(i), grid.qy(j), grid.qz};
      try {
        out.values[size_t(i) * grid.ny + j] = solve_single(cfg, q, set).f;
      } catch (const std::exception& e) {
        throw SweepError(i, j, q.qx, q.qy, q.qz,
                         "sweep node (" + std::to_string(i) + "," + std::to_string(j) +
                             "): " + e.what());
      }
    }
  }
  return out;
}

Momentum SliceSpec::point(double q) const {
  Momentum m = base;
  switch (axis) {
    case Axis::qx: m.qx = q; break;
    case Axis::qy: m.qy = q; break;
    case Axis::qz: m.qz = q; break;
  }
  return m;
}

void SliceSpec::validate() const {
  if (n < 2) throw ConfigError("slice config: n must be >= 2");
  if (!(q_max > q_min)) throw ConfigError("slice config: q_max must exceed q_min");
  if (!std::isfinite(q_min) || !std::isfinite(q_max))
    throw ConfigError("slice config: non-finite bound");
}

std::vector<SlicePoint> compute_slice_1d(const FieldConfig& cfg, const SliceSpec& slice,
                                         const SolverSettings& set, int jobs) {
  cfg.validate();
  slice.validate();
  set.validate();

  std::vector<SlicePoint> out(slice.n);
  for (int i = 0; i < slice.n; ++i)
    out[i].q = slice.q_min + (slice.q_max - slice.q_min) * double(i) / double(slice.n - 1);

  FailureLatch latch;
  const int n_threads = resolve_jobs(jobs);
  (void)n_threads;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(n_threads)
#endif
  for (int i = 0; i < slice.n; ++i) {
    if (latch.failed.load(std::memory_order_relaxed)) continue;
    const Momentum q = slice.point(out[i].q);
    try {
      out[i].f = solve_single(cfg, q, set).f;
    } catch (const std::exception& e) {
      latch.record(i, 0, q, e.what());
    }
  }

  if (latch.failed.load()) latch.rethrow();
  return out;
}

Density2D density_2d(const SpectrumGrid& spec, double boundary_frac) {
  const GridSpec& g = spec.grid;
  Density2D res;

  for (int i = 0; i < g.nx; ++i) {
    const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.ny; ++j) {
      const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
      const double f = std::max(0.0, spec.at(i, j));
      res.value += wx * wy * f;
      res.max_f = std::max(res.max_f, f);
      if (i == 0 || i == g.nx - 1 || j == 0 || j == g.ny - 1)
        res.boundary_max = std::max(res.boundary_max, f);
    }
  }

  const double two_pi = 2.0 * std::numbers::pi;
  res.value *= g.dx() * g.dy() / (two_pi * two_pi);
  res.support_ok = res.max_f == 0.0 || res.boundary_max < boundary_frac * res.max_f;
  return res;
}

void Grid3Spec::validate() const {
  if (n < 2) throw ConfigError("density3d config: n must be >= 2");
  if (!(extent > 0.0)) throw ConfigError("density3d config: extent must be > 0");
}

double density_3d(const FieldConfig& cfg, const Grid3Spec& grid3, const SolverSettings& set,
                  int jobs, const std::function<double(double, double, double)>& f_override) {
  cfg.validate();
  grid3.validate();
  set.validate();

  const int n = grid3.n;
  const double lo = -grid3.extent;
  const double h = 2.0 * grid3.extent / double(n - 1);
  auto node = [&](int i) { return lo + h * double(i); };

  FailureLatch latch;
  const int n_threads = resolve_jobs(jobs);
  (void)n_threads;

  // Column integrals land in an index-addressed array; the final reduction is
  // serial so the result does not depend on the worker count.
  std::vector<double> col(size_t(n) * n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(dynamic) num_threads(n_threads)
#endif
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (latch.failed.load(std::memory_order_relaxed)) continue;
      double row = 0.0;
      for (int k = 0; k < n; ++k) {
        const double wz = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        const Momentum q{node(i), node(j), node(k)};
        double f;
        try {
          f = f_override ? f_override(q.qx, q.qy, q.qz) : solve_single(cfg, q, set).f;
        } catch (const std::exception& e) {
          latch.record(i, j, q, e.what());
          break;
        }
        row += wz * std::max(0.0, f);
      }
      col[size_t(i) * n + j] = row;
    }
  }

  if (latch.failed.load()) latch.rethrow();

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      total += wx * wy * col[size_t(i) * n + j];
    }
  }
  const double two_pi = 2.0 * std::numbers::pi;
  return total * h * h * h / (two_pi * two_pi * two_pi);
}

}  // namespace dhw
