#pragma once

#include <map>
#include <string>
#include <vector>

#include "dhw/sweep.hpp"

namespace dhw {

// Command-specific sections of the run configuration. Every key has a
// default, so an empty file is a valid configuration.

struct PredictSpec {
  int ell = 0;      // photons absorbed; 0 = derive from omega and effective mass
  int k_min = 0;    // fringe index range; 0,0 = every fringe inside the grid window
  int k_max = 0;
  int n_phi = 512;  // azimuth samples per spiral arm
};

struct AnalysisSpec {
  std::vector<double> radii;      // explicit ring radii; empty = auto from support
  int n_radii = 5;
  int n_phi = 256;
  double min_prominence = 1e-3;
  double pitch_q = 0.6;           // radius at which fringe pitch is measured
  double pitch_half_span = 0.05;
  int pitch_n_radii = 11;
};

struct DensitySpec {
  std::string mode = "2d";  // "2d" (grid section) or "3d" (coarse box)
  double extent3 = 1.2;
  int n3 = 64;
};

struct ScanSpec {
  std::string variable;        // "T_delay" or "phi2"
  std::vector<double> values;  // non-empty when the scan command runs
};

struct Table1Spec {
  int k_min = 0;  // 0,0 = every fringe inside the slice window
  int k_max = 0;
  std::string golden = "builtin";  // "builtin", "off", or a CSV path
};

struct RunConfig {
  FieldConfig field;
  GridSpec grid;
  SolverSettings solver;
  SliceSpec slice;
  PredictSpec predict;
  AnalysisSpec analysis;
  DensitySpec density;
  ScanSpec scan;
  Table1Spec table1;
  std::string out_prefix = "out";
};

// Flat key = value file with dotted section prefixes and '#' comments.
// Unknown keys and malformed values raise ConfigError with the line number.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// Ordered key=value pairs for the field/grid/solver triple; this is the
// metadata block every output file embeds.
std::vector<std::pair<std::string, std::string>> run_metadata(const FieldConfig& field,
                                                              const GridSpec& grid,
                                                              const SolverSettings& solver);
std::vector<std::pair<std::string, std::string>> field_metadata(const FieldConfig& field);
std::vector<std::pair<std::string, std::string>> solver_metadata(const SolverSettings& solver);

// Reconstruct configuration structs from parsed metadata (CSV headers or the
// JSON sidecar). Missing keys keep their defaults.
FieldConfig field_from_metadata(const std::map<std::string, std::string>& kv);
GridSpec grid_from_metadata(const std::map<std::string, std::string>& kv);
SolverSettings solver_from_metadata(const std::map<std::string, std::string>& kv);

// Full-precision decimal formatting that round-trips doubles exactly.
std::string format_double(double x);
double parse_double(const std::string& s);  // throws ConfigError
long parse_long(const std::string& s);      // throws ConfigError

Axis axis_from_string(const std::string& s);  // "qx"/"x", ...
const char* to_string(Axis axis);

}  // namespace dhw
