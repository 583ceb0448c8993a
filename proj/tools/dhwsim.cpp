// dhwsim: batch front-end for the pair-production simulator.
//
// Commands: spectrum | slice | density | predict | analyze | compare-table1 | scan
// Exit codes: 0 success, 1 config error, 2 solver/analysis failure,
//             3 reference-table check failure (compare-table1 only).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhw/analysis.hpp"
#include "dhw/config.hpp"
#include "dhw/csv.hpp"
#include "dhw/errors.hpp"
#include "dhw/semiclassical.hpp"
#include "dhw/version.hpp"

namespace {

using namespace dhw;

struct CommonOptions {
  std::string config_path;
  std::string out_prefix;
  int jobs = 0;
  std::string grid_override;
  std::string tol_override;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "run configuration file")->required();
  cmd->add_option("--out", opt.out_prefix, "output path prefix (overrides output.prefix)");
  cmd->add_option("--jobs", opt.jobs, "worker count for the momentum sweep (0 = all cores)");
  cmd->add_option("--grid", opt.grid_override, "grid override NX,NY");
  cmd->add_option("--tol", opt.tol_override, "solver tolerance override REL,ABS");
}

RunConfig load_config(const CommonOptions& opt) {
  RunConfig rc = parse_config_file(opt.config_path);
  if (!opt.out_prefix.empty()) rc.out_prefix = opt.out_prefix;
  if (!opt.grid_override.empty()) {
    const size_t c = opt.grid_override.find(',');
    if (c == std::string::npos) throw ConfigError("--grid expects NX,NY");
    rc.grid.nx = int(parse_long(opt.grid_override.substr(0, c)));
    rc.grid.ny = int(parse_long(opt.grid_override.substr(c + 1)));
  }
  if (!opt.tol_override.empty()) {
    const size_t c = opt.tol_override.find(',');
    if (c == std::string::npos) throw ConfigError("--tol expects REL,ABS");
    rc.solver.rel_tol = parse_double(opt.tol_override.substr(0, c));
    rc.solver.abs_tol = parse_double(opt.tol_override.substr(c + 1));
  }
  rc.field.validate();
  rc.grid.validate();
  rc.solver.validate();
  return rc;
}

// Mid-support radius: a circle with solid signal for rotation estimates.
double ring_peak_radius(const SpectrumGrid& spec) {
  const RingSupport s = ring_support(spec);
  return 0.5 * (s.q_in + s.q_out);
}

void print_spectrum_summary(const SpectrumGrid& spec) {
  const Density2D dens = density_2d(spec);
  std::printf("density_2d = %.9g  (support_ok = %s)\n", dens.value,
              dens.support_ok ? "yes" : "no");
  try {
    const RingSupport s = ring_support(spec);
    std::printf("q_in = %.4f  q_out = %.4f  max_f = %.6g\n", s.q_in, s.q_out, s.max_f);
  } catch (const AnalysisError&) {
    std::printf("q_in/q_out: n/a (empty spectrum)\n");
  }
}

int cmd_spectrum(const CommonOptions& opt) {
  const RunConfig rc = load_config(opt);
  const SpectrumGrid spec = compute_spectrum(rc.field, rc.grid, rc.solver, opt.jobs);
  const std::string csv = rc.out_prefix + ".csv";
  write_spectrum_csv(spec, csv);
  write_spectrum_meta_json(spec, rc.out_prefix + ".meta.json");
  std::printf("wrote %s\n", csv.c_str());
  print_spectrum_summary(spec);
  return 0;
}

int cmd_slice(const CommonOptions& opt) {
  const RunConfig rc = load_config(opt);
  const auto points = compute_slice_1d(rc.field, rc.slice, rc.solver, opt.jobs);
  const std::string csv = rc.out_prefix + "_slice.csv";
  write_slice_csv(points, rc.field, rc.slice, rc.solver, csv);
  double fmax = 0.0;
  for (const auto& p : points) fmax = std::max(fmax, p.f);
  std::printf("wrote %s (%zu points, max f = %.6g)\n", csv.c_str(), points.size(), fmax);
  return 0;
}

int cmd_density(const CommonOptions& opt, const std::string& in_path) {
  const RunConfig rc = load_config(opt);
  if (!in_path.empty()) {
    const SpectrumGrid spec = read_spectrum_csv(in_path);
    const Density2D dens = density_2d(spec);
    std::printf("density_2d = %.9g  (support_ok = %s)\n", dens.value,
                dens.support_ok ? "yes" : "no");
    return 0;
  }
  if (rc.density.mode == "3d") {
    Grid3Spec g3{rc.density.extent3, rc.density.n3};
    const double n = density_3d(rc.field, g3, rc.solver, opt.jobs);
    std::printf("density_3d = %.9g  (box extent %.3g, %d^3 nodes)\n", n, g3.extent, g3.n);
    return 0;
  }
  if (rc.density.mode != "2d")
    throw ConfigError("density.mode must be '2d' or '3d', got '" + rc.density.mode + "'");
  const SpectrumGrid spec = compute_spectrum(rc.field, rc.grid, rc.solver, opt.jobs);
  print_spectrum_summary(spec);
  return 0;
}

int cmd_predict(const CommonOptions& opt) {
  const RunConfig rc = load_config(opt);
  const FieldConfig& f = rc.field;
  if (!(f.T_delay > 0.0) && f.delta1 != f.delta2)
    std::fprintf(stderr, "note: zero delay gives no two-pulse interference model\n");

  const double m_star = effective_mass(f.amp1(), f.omega);
  const int ell = rc.predict.ell > 0 ? rc.predict.ell : photon_number(f.omega, m_star);
  const double q_hi = std::max(std::max(-rc.grid.qx_min, rc.grid.qx_max),
                               std::max(-rc.grid.qy_min, rc.grid.qy_max));

  auto meta = field_metadata(f);
  meta.emplace_back("predict.ell", std::to_string(ell));
  meta.emplace_back("predict.m_star", format_double(m_star));

  std::vector<std::pair<int, double>> fringes;
  if (rc.predict.k_min == 0 && rc.predict.k_max == 0) {
    fringes = ramsey_peaks_in_window(f.T_delay, 0.0, q_hi);
  } else {
    for (int k = rc.predict.k_min; k <= rc.predict.k_max; ++k)
      if (auto q = ramsey_peak(f.T_delay, k)) fringes.emplace_back(k, *q);
  }
  const std::string fringe_csv = rc.out_prefix + "_fringes.csv";
  write_fringes_csv(fringes, meta, fringe_csv);
  std::printf("wrote %s (%zu fringes, ell = %d)\n", fringe_csv.c_str(), fringes.size(), ell);

  if (f.delta1 == f.delta2) {
    std::printf("equal handedness: fringes are rings, no spiral curves emitted\n");
    return 0;
  }

  const SpiralPrediction pred{f.T_delay, ell, f.delta1, f.delta2};
  std::vector<int> kprimes;
  if (rc.predict.k_min == 0 && rc.predict.k_max == 0) {
    kprimes = spiral_kprimes_in_window(pred, 0.0, q_hi);
  } else {
    for (int k = rc.predict.k_min; k <= rc.predict.k_max; ++k) kprimes.push_back(k);
  }

  std::vector<SpiralSample> samples;
  for (int kp : kprimes) {
    for (int s = 0; s < rc.predict.n_phi; ++s) {
      const double phi = 2.0 * std::numbers::pi * double(s) / double(rc.predict.n_phi);
      if (auto q = spiral_radius(phi, kp, pred); q && *q <= q_hi)
        samples.push_back({kp, phi, *q});
    }
  }
  const std::string spiral_csv = rc.out_prefix + "_spirals.csv";
  write_spiral_csv(samples, meta, spiral_csv);
  std::printf("wrote %s (%zu arms, %zu points)\n", spiral_csv.c_str(), kprimes.size(),
              samples.size());
  return 0;
}

int cmd_analyze(const CommonOptions& opt, const std::string& in_path,
                const std::string& in2_path) {
  const RunConfig rc = load_config(opt);
  if (in_path.empty()) throw ConfigError("analyze: --in SPECTRUM.csv is required");
  const SpectrumGrid spec = read_spectrum_csv(in_path);
  std::optional<SpectrumGrid> ref;
  if (!in2_path.empty()) ref = read_spectrum_csv(in2_path);

  const AnalysisReport rep =
      analyze_spectrum(spec, ref ? &*ref : nullptr, rc.analysis.pitch_q, rc.analysis.n_radii,
                       rc.analysis.n_phi);
  const std::string text = to_text(rep);
  std::fputs(text.c_str(), stdout);

  const std::string path = rc.out_prefix + "_report.txt";
  std::ofstream out(path);
  out << text;
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

std::vector<ReferenceFringe> load_golden(const std::string& spec_str) {
  if (spec_str == "builtin") {
    const auto builtin = reference_fringes();
    return {builtin.begin(), builtin.end()};
  }
  std::ifstream in(spec_str);
  if (!in) throw ConfigError("cannot open golden table '" + spec_str + "'");
  std::vector<ReferenceFringe> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // k,q_num,q_eva
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string k, qn, qe;
    std::getline(ss, k, ',');
    std::getline(ss, qn, ',');
    std::getline(ss, qe, ',');
    rows.push_back({int(parse_long(k)), parse_double(qn), parse_double(qe)});
  }
  return rows;
}

int cmd_compare_table1(const CommonOptions& opt) {
  const RunConfig rc = load_config(opt);
  const Table1Report rep =
      table1_report(rc.field, rc.solver, rc.slice, rc.table1.k_min, rc.table1.k_max,
                    rc.analysis.min_prominence, opt.jobs);

  std::printf("%4s %10s %10s %10s\n", "k", "q_num", "q_eva", "diff");
  for (const auto& r : rep.rows)
    std::printf("%4d %10.5f %10.5f %10.5f\n", r.k, r.q_num, r.q_eva, r.diff);
  if (!rep.all_diffs_positive)
    std::printf("warning: not every fringe estimate exceeds its simulated peak\n");

  if (rc.table1.golden == "off") return 0;
  const std::vector<ReferenceFringe> golden = load_golden(rc.table1.golden);
  if (golden.size() != rep.rows.size()) {
    std::printf("FAIL: %zu rows vs %zu reference rows\n", rep.rows.size(), golden.size());
    return 3;
  }
  constexpr double kTol = 5e-3;
  int failures = 0;
  for (size_t i = 0; i < golden.size(); ++i) {
    const double dev = std::fabs(rep.rows[i].q_num - golden[i].q_num);
    if (rep.rows[i].k != golden[i].k || dev > kTol) {
      std::printf("FAIL row %zu: k=%d q_num=%.5f reference=%.5f |dev|=%.5f\n", i + 1,
                  rep.rows[i].k, rep.rows[i].q_num, golden[i].q_num, dev);
      ++failures;
    }
  }
  if (failures) return 3;
  std::printf("all %zu peaks within %.0e of the reference table\n", golden.size(), kTol);
  return 0;
}

int cmd_scan(const CommonOptions& opt) {
  const RunConfig rc = load_config(opt);
  if (rc.scan.values.empty()) throw ConfigError("scan: scan.values must be non-empty");
  const bool scan_T = rc.scan.variable == "T_delay";
  const bool scan_phi2 = rc.scan.variable == "phi2";
  if (!scan_T && !scan_phi2)
    throw ConfigError("scan.variable must be 'T_delay' or 'phi2', got '" + rc.scan.variable +
                      "'");

  std::vector<ScanRow> rows;
  std::optional<SpectrumGrid> first;
  double first_radius = 0.0;

  for (const double value : rc.scan.values) {
    FieldConfig f = rc.field;
    if (scan_T)
      f.T_delay = value;
    else
      f.phi2 = value;

    const SpectrumGrid spec = compute_spectrum(f, rc.grid, rc.solver, opt.jobs);
    char tag[64];
    std::snprintf(tag, sizeof(tag), "%s_%s_%g", rc.out_prefix.c_str(),
                  rc.scan.variable.c_str(), value);
    write_spectrum_csv(spec, std::string(tag) + ".csv");
    write_spectrum_meta_json(spec, std::string(tag) + ".meta.json");

    ScanRow row;
    row.value = value;
    const Density2D dens = density_2d(spec);
    row.density = dens.value;
    row.support_ok = dens.support_ok;
    try {
      const RingSupport s = ring_support(spec);
      row.q_in = s.q_in;
      row.q_out = s.q_out;
      const auto radii = default_radii(spec, rc.analysis.n_radii);
      const ArmCount arms = arm_count_and_chirality(spec, radii, rc.analysis.n_phi);
      row.dominant_harmonic = arms.dominant;
      row.chirality = to_string(arms.chirality);
      const auto pitch = measure_pitch(spec, rc.analysis.pitch_q, rc.analysis.pitch_half_span,
                                       rc.analysis.pitch_n_radii, rc.analysis.n_phi);
      row.pitch = pitch ? pitch->pitch : std::nan("");
    } catch (const AnalysisError&) {
      row.chirality = "none";
      row.pitch = std::nan("");
    }

    if (!first) {
      first = spec;
      try {
        first_radius = ring_peak_radius(spec);
      } catch (const AnalysisError&) {
        first_radius = 0.0;
      }
      row.rotation = 0.0;
    } else if (scan_phi2 && first_radius > 0.0) {
      try {
        row.rotation = estimate_rotation(*first, spec, first_radius, rc.analysis.n_phi);
      } catch (const AnalysisError&) {
        row.rotation = std::nan("");
      }
    } else {
      row.rotation = std::nan("");
    }

    std::printf("%s = %-8g density = %.6g harmonic = %d chirality = %s pitch = %.4g\n",
                rc.scan.variable.c_str(), value, row.density, row.dominant_harmonic,
                row.chirality.c_str(), row.pitch);
    rows.push_back(row);
  }

  auto meta = run_metadata(rc.field, rc.grid, rc.solver);
  meta.emplace_back("scan.variable", rc.scan.variable);
  const std::string summary = rc.out_prefix + "_scan_summary.csv";
  write_scan_summary_csv(rows, meta, summary);
  std::printf("wrote %s\n", summary.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pair-production momentum spectra from two time-delayed circular pulses"};
  app.set_version_flag("--version", dhw::kVersion);
  app.require_subcommand(1);

  CommonOptions opt;
  std::string in_path, in2_path;

  CLI::App* spectrum = app.add_subcommand("spectrum", "compute a 2D momentum spectrum");
  add_common(spectrum, opt);
  CLI::App* slice = app.add_subcommand("slice", "compute a 1D momentum slice");
  add_common(slice, opt);
  CLI::App* density = app.add_subcommand("density", "integrate the pair number density");
  add_common(density, opt);
  density->add_option("--in", in_path, "integrate an existing spectrum CSV");
  CLI::App* predict = app.add_subcommand("predict", "fringe and spiral model curves");
  add_common(predict, opt);
  CLI::App* analyze = app.add_subcommand("analyze", "analyze a spectrum CSV");
  add_common(analyze, opt);
  analyze->add_option("--in", in_path, "spectrum CSV to analyze")->required();
  analyze->add_option("--in2", in2_path, "second spectrum for rotation estimates");
  CLI::App* table1 = app.add_subcommand("compare-table1",
                                        "compare fringe peaks against the reference table");
  add_common(table1, opt);
  CLI::App* scan = app.add_subcommand("scan", "sweep T_delay or phi2 over a value list");
  add_common(scan, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(opt);
    if (slice->parsed()) return cmd_slice(opt);
    if (density->parsed()) return cmd_density(opt, in_path);
    if (predict->parsed()) return cmd_predict(opt);
    if (analyze->parsed()) return cmd_analyze(opt, in_path, in2_path);
    if (table1->parsed()) return cmd_compare_table1(opt);
    if (scan->parsed()) return cmd_scan(opt);
  } catch (const dhw::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const dhw::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
