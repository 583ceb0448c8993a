#include "dhw/csv.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dhw/config.hpp"
#include "dhw/errors.hpp"
#include "dhw/version.hpp"

namespace dhw {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  return out;
}

void write_meta(std::ofstream& out,
                const std::vector<std::pair<std::string, std::string>>& meta) {
  out << "# version=" << kVersion << "\n";
  for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
}

}  // namespace

void write_spectrum_csv(const SpectrumGrid& spec, const std::string& path) {
  std::ofstream out = open_out(path);
  write_meta(out, run_metadata(spec.field, spec.grid, spec.solver));
  out << "qx,qy,f\n";
  for (int i = 0; i < spec.grid.nx; ++i) {
    const std::string qx = format_double(spec.grid.qx(i));
    for (int j = 0; j < spec.grid.ny; ++j) {
      out << qx << ',' << format_double(spec.grid.qy(j)) << ','
          << format_double(spec.at(i, j)) << '\n';
    }
  }
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

void write_spectrum_meta_json(const SpectrumGrid& spec, const std::string& path) {
  nlohmann::json j;
  for (const auto& [k, v] : run_metadata(spec.field, spec.grid, spec.solver)) {
    const size_t dot = k.find('.');
    j[k.substr(0, dot)][k.substr(dot + 1)] = v;
  }
  j["provenance"]["code_version"] = spec.prov.code_version;
  j["provenance"]["timestamp"] = spec.prov.timestamp;

  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

SpectrumGrid read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spectrum file '" + path + "'");

  std::map<std::string, std::string> kv;
  std::string line;
  bool header_seen = false;
  std::vector<double> values;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const size_t start = line.find_first_not_of("# ");
      if (start == std::string::npos) continue;
      const size_t eq = line.find('=', start);
      if (eq != std::string::npos)
        kv[line.substr(start, eq - start)] = line.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line != "qx,qy,f")
        throw ConfigError("'" + path + "': expected header 'qx,qy,f', got '" + line + "'");
      header_seen = true;
      continue;
    }
    const size_t c1 = line.find(',');
    const size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ConfigError("'" + path + "': malformed data row '" + line + "'");
    values.push_back(parse_double(line.substr(c2 + 1)));
  }

  SpectrumGrid spec;
  spec.field = field_from_metadata(kv);
  spec.grid = grid_from_metadata(kv);
  spec.solver = solver_from_metadata(kv);
  spec.prov.code_version = kv.count("version") ? kv.at("version") : "";
  spec.grid.validate();

  const size_t expected = size_t(spec.grid.nx) * spec.grid.ny;
  if (values.size() != expected)
    throw ConfigError("'" + path + "': expected " + std::to_string(expected) + " rows, got " +
                      std::to_string(values.size()));
  spec.values = std::move(values);
  return spec;
}

void write_slice_csv(const std::vector<SlicePoint>& points, const FieldConfig& field,
                     const SliceSpec& slice, const SolverSettings& solver,
                     const std::string& path) {
  std::ofstream out = open_out(path);
  auto meta = field_metadata(field);
  meta.emplace_back("slice.axis", to_string(slice.axis));
  meta.emplace_back("slice.q_min", format_double(slice.q_min));
  meta.emplace_back("slice.q_max", format_double(slice.q_max));
  meta.emplace_back("slice.n", std::to_string(slice.n));
  meta.emplace_back("slice.qx", format_double(slice.base.qx));
  meta.emplace_back("slice.qy", format_double(slice.base.qy));
  meta.emplace_back("slice.qz", format_double(slice.base.qz));
  for (auto& p : solver_metadata(solver)) meta.push_back(std::move(p));
  write_meta(out, meta);

  out << "q,f\n";
  for (const auto& p : points) out << format_double(p.q) << ',' << format_double(p.f) << '\n';
}

void write_fringes_csv(const std::vector<std::pair<int, double>>& fringes,
                       const std::vector<std::pair<std::string, std::string>>& meta,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "k,q\n";
  for (const auto& [k, q] : fringes) out << k << ',' << format_double(q) << '\n';
}

void write_spiral_csv(const std::vector<SpiralSample>& samples,
                      const std::vector<std::pair<std::string, std::string>>& meta,
                      const std::string& path) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "kprime,phi,q\n";
  for (const auto& s : samples)
    out << s.kprime << ',' << format_double(s.phi) << ',' << format_double(s.q) << '\n';
}

void write_scan_summary_csv(const std::vector<ScanRow>& rows,
                            const std::vector<std::pair<std::string, std::string>>& meta,
                            const std::string& path) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "value,density,support_ok,q_in,q_out,dominant_harmonic,chirality,pitch,rotation\n";
  for (const auto& r : rows) {
    out << format_double(r.value) << ',' << format_double(r.density) << ','
        << (r.support_ok ? 1 : 0) << ',' << format_double(r.q_in) << ','
        << format_double(r.q_out) << ',' << r.dominant_harmonic << ',' << r.chirality << ','
        << format_double(r.pitch) << ',' << format_double(r.rotation) << '\n';
  }
}

}  // namespace dhw
