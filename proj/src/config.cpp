#include "dhw/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dhw/errors.hpp"

namespace dhw {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError("not a number: '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError("not an integer: '" + s + "'");
  return v;
}

Axis axis_from_string(const std::string& s) {
  if (s == "qx" || s == "x") return Axis::qx;
  if (s == "qy" || s == "y") return Axis::qy;
  if (s == "qz" || s == "z") return Axis::qz;
  throw ConfigError("unknown axis '" + s + "' (expected qx, qy or qz)");
}

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::qx: return "qx";
    case Axis::qy: return "qy";
    case Axis::qz: return "qz";
  }
  return "qx";
}

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item));
  }
  return out;
}

// One key = value assignment into the run configuration.
// Returns false when the key is unknown.
bool apply_key(RunConfig& rc, const std::string& key, const std::string& value) {
  auto d = [&] { return parse_double(value); };
  auto i = [&] { return int(parse_long(value)); };

  // field
  if (key == "field.E0") rc.field.E0 = d();
  else if (key == "field.delta1") rc.field.delta1 = i();
  else if (key == "field.delta2") rc.field.delta2 = i();
  else if (key == "field.omega") rc.field.omega = d();
  else if (key == "field.tau") rc.field.tau = d();
  else if (key == "field.phi1") rc.field.phi1 = d();
  else if (key == "field.phi2") rc.field.phi2 = d();
  else if (key == "field.T_delay") rc.field.T_delay = d();
  else if (key == "field.amp2_scale") rc.field.amp2_scale = d();
  // grid
  else if (key == "grid.qx_min") rc.grid.qx_min = d();
  else if (key == "grid.qx_max") rc.grid.qx_max = d();
  else if (key == "grid.nx") rc.grid.nx = i();
  else if (key == "grid.qy_min") rc.grid.qy_min = d();
  else if (key == "grid.qy_max") rc.grid.qy_max = d();
  else if (key == "grid.ny") rc.grid.ny = i();
  else if (key == "grid.qz") rc.grid.qz = d();
  // solver
  else if (key == "solver.rel_tol") rc.solver.rel_tol = d();
  else if (key == "solver.abs_tol") rc.solver.abs_tol = d();
  else if (key == "solver.pad") rc.solver.pad = d();
  else if (key == "solver.max_steps") rc.solver.max_steps = parse_long(value);
  // slice
  else if (key == "slice.axis") rc.slice.axis = axis_from_string(value);
  else if (key == "slice.q_min") rc.slice.q_min = d();
  else if (key == "slice.q_max") rc.slice.q_max = d();
  else if (key == "slice.n") rc.slice.n = i();
  else if (key == "slice.qx") rc.slice.base.qx = d();
  else if (key == "slice.qy") rc.slice.base.qy = d();
  else if (key == "slice.qz") rc.slice.base.qz = d();
  // predict
  else if (key == "predict.ell") rc.predict.ell = i();
  else if (key == "predict.k_min") rc.predict.k_min = i();
  else if (key == "predict.k_max") rc.predict.k_max = i();
  else if (key == "predict.n_phi") rc.predict.n_phi = i();
  // analysis
  else if (key == "analysis.radii") rc.analysis.radii = parse_double_list(value);
  else if (key == "analysis.n_radii") rc.analysis.n_radii = i();
  else if (key == "analysis.n_phi") rc.analysis.n_phi = i();
  else if (key == "analysis.min_prominence") rc.analysis.min_prominence = d();
  else if (key == "analysis.pitch_q") rc.analysis.pitch_q = d();
  else if (key == "analysis.pitch_half_span") rc.analysis.pitch_half_span = d();
  else if (key == "analysis.pitch_n_radii") rc.analysis.pitch_n_radii = i();
  // density
  else if (key == "density.mode") rc.density.mode = value;
  else if (key == "density.extent3") rc.density.extent3 = d();
  else if (key == "density.n3") rc.density.n3 = i();
  // scan
  else if (key == "scan.variable") rc.scan.variable = value;
  else if (key == "scan.values") rc.scan.values = parse_double_list(value);
  // table1
  else if (key == "table1.k_min") rc.table1.k_min = i();
  else if (key == "table1.k_max") rc.table1.k_max = i();
  else if (key == "table1.golden") rc.table1.golden = value;
  // output
  else if (key == "output.prefix") rc.out_prefix = value;
  else return false;
  return true;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig rc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (!apply_key(rc, key, value))
        throw ConfigError("unknown key '" + key + "'");
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rc;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::vector<std::pair<std::string, std::string>> field_metadata(const FieldConfig& f) {
  return {
      {"field.E0", format_double(f.E0)},
      {"field.delta1", std::to_string(f.delta1)},
      {"field.delta2", std::to_string(f.delta2)},
      {"field.omega", format_double(f.omega)},
      {"field.tau", format_double(f.tau)},
      {"field.phi1", format_double(f.phi1)},
      {"field.phi2", format_double(f.phi2)},
      {"field.T_delay", format_double(f.T_delay)},
      {"field.amp2_scale", format_double(f.amp2_scale)},
  };
}

std::vector<std::pair<std::string, std::string>> solver_metadata(const SolverSettings& s) {
  return {
      {"solver.rel_tol", format_double(s.rel_tol)},
      {"solver.abs_tol", format_double(s.abs_tol)},
      {"solver.pad", format_double(s.pad)},
      {"solver.max_steps", std::to_string(s.max_steps)},
  };
}

std::vector<std::pair<std::string, std::string>> run_metadata(const FieldConfig& field,
                                                              const GridSpec& grid,
                                                              const SolverSettings& solver) {
  std::vector<std::pair<std::string, std::string>> kv = field_metadata(field);
  kv.emplace_back("grid.qx_min", format_double(grid.qx_min));
  kv.emplace_back("grid.qx_max", format_double(grid.qx_max));
  kv.emplace_back("grid.nx", std::to_string(grid.nx));
  kv.emplace_back("grid.qy_min", format_double(grid.qy_min));
  kv.emplace_back("grid.qy_max", format_double(grid.qy_max));
  kv.emplace_back("grid.ny", std::to_string(grid.ny));
  kv.emplace_back("grid.qz", format_double(grid.qz));
  for (auto& p : solver_metadata(solver)) kv.push_back(std::move(p));
  return kv;
}

namespace {

bool get(const std::map<std::string, std::string>& kv, const std::string& key,
         std::string& out) {
  const auto it = kv.find(key);
  if (it == kv.end()) return false;
  out = it->second;
  return true;
}

}  // namespace

FieldConfig field_from_metadata(const std::map<std::string, std::string>& kv) {
  FieldConfig f;
  std::string v;
  if (get(kv, "field.E0", v)) f.E0 = parse_double(v);
  if (get(kv, "field.delta1", v)) f.delta1 = int(parse_long(v));
  if (get(kv, "field.delta2", v)) f.delta2 = int(parse_long(v));
  if (get(kv, "field.omega", v)) f.omega = parse_double(v);
  if (get(kv, "field.tau", v)) f.tau = parse_double(v);
  if (get(kv, "field.phi1", v)) f.phi1 = parse_double(v);
  if (get(kv, "field.phi2", v)) f.phi2 = parse_double(v);
  if (get(kv, "field.T_delay", v)) f.T_delay = parse_double(v);
  if (get(kv, "field.amp2_scale", v)) f.amp2_scale = parse_double(v);
  return f;
}

GridSpec grid_from_metadata(const std::map<std::string, std::string>& kv) {
  GridSpec g;
  std::string v;
  if (get(kv, "grid.qx_min", v)) g.qx_min = parse_double(v);
  if (get(kv, "grid.qx_max", v)) g.qx_max = parse_double(v);
  if (get(kv, "grid.nx", v)) g.nx = int(parse_long(v));
  if (get(kv, "grid.qy_min", v)) g.qy_min = parse_double(v);
  if (get(kv, "grid.qy_max", v)) g.qy_max = parse_double(v);
  if (get(kv, "grid.ny", v)) g.ny = int(parse_long(v));
  if (get(kv, "grid.qz", v)) g.qz = parse_double(v);
  return g;
}

SolverSettings solver_from_metadata(const std::map<std::string, std::string>& kv) {
  SolverSettings s;
  std::string v;
  if (get(kv, "solver.rel_tol", v)) s.rel_tol = parse_double(v);
  if (get(kv, "solver.abs_tol", v)) s.abs_tol = parse_double(v);
  if (get(kv, "solver.pad", v)) s.pad = parse_double(v);
  if (get(kv, "solver.max_steps", v)) s.max_steps = parse_long(v);
  return s;
}

}  // namespace dhw
