#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dhw/analysis.hpp"
#include "dhw/sweep.hpp"

namespace dhw {

// All writers emit '#'-prefixed key=value metadata lines, then a column
// header row, then data rows. Doubles are written with full round-trip
// precision, so written files re-parse to bitwise-identical values.

void write_spectrum_csv(const SpectrumGrid& spec, const std::string& path);

// Sidecar with the same metadata plus the provenance timestamp, for machine
// consumption; the CSV itself stays timestamp-free and reproducible.
void write_spectrum_meta_json(const SpectrumGrid& spec, const std::string& path);

SpectrumGrid read_spectrum_csv(const std::string& path);

void write_slice_csv(const std::vector<SlicePoint>& points, const FieldConfig& field,
                     const SliceSpec& slice, const SolverSettings& solver,
                     const std::string& path);

void write_fringes_csv(const std::vector<std::pair<int, double>>& fringes,
                       const std::vector<std::pair<std::string, std::string>>& meta,
                       const std::string& path);

struct SpiralSample {
  int kprime;
  double phi;
  double q;
};

void write_spiral_csv(const std::vector<SpiralSample>& samples,
                      const std::vector<std::pair<std::string, std::string>>& meta,
                      const std::string& path);

struct ScanRow {
  double value = 0.0;
  double density = 0.0;
  bool support_ok = true;
  double q_in = 0.0;
  double q_out = 0.0;
  int dominant_harmonic = 0;
  std::string chirality;
  double pitch = 0.0;         // NaN when unmeasurable
  double rotation = 0.0;      // vs. first scan value; NaN when not applicable
};

void write_scan_summary_csv(const std::vector<ScanRow>& rows,
                            const std::vector<std::pair<std::string, std::string>>& meta,
                            const std::string& path);

}  // namespace dhw
