#include "fsi/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fsi/parallel.hpp"

namespace fsi {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ParseError("invalid number for key '" + key + "': '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ParseError("invalid integer for key '" + key + "': '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("invalid boolean for key '" + key + "': '" + v + "'");
}

Preset to_preset(const std::string& key, const std::string& v) {
  try {
    return parse_preset(v);
  } catch (const ParseError& e) {
    throw ParseError("invalid preset for key '" + key + "': " + e.what());
  }
}

const char* gradient_name(CoefficientGradient g) {
  return g == CoefficientGradient::Projection ? "projection" : "hessian";
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mesh.path", [](RunConfig& c, auto&, auto& v) { c.mesh_path = v; }},
      {"mesh.degree", [](RunConfig& c, auto& k, auto& v) { c.degree = to_int(k, v); }},
      {"mesh.quad_order", [](RunConfig& c, auto& k, auto& v) { c.quad_order = to_int(k, v); }},
      {"material.rho_f", [](RunConfig& c, auto& k, auto& v) { c.material.rho_f = to_double(k, v); }},
      {"material.rho_s", [](RunConfig& c, auto& k, auto& v) { c.material.rho_s = to_double(k, v); }},
      {"material.mu", [](RunConfig& c, auto& k, auto& v) { c.material.mu = to_double(k, v); }},
      {"material.mu_s", [](RunConfig& c, auto& k, auto& v) { c.material.mu_s = to_double(k, v); }},
      {"material.lambda_s", [](RunConfig& c, auto& k, auto& v) { c.material.lambda_s = to_double(k, v); }},
      {"material.C", [](RunConfig& c, auto& k, auto& v) { c.material.C_penalty = to_double(k, v); }},
      {"solver.T", [](RunConfig& c, auto& k, auto& v) { c.solver.T = to_double(k, v); }},
      {"solver.dt", [](RunConfig& c, auto& k, auto& v) { c.solver.dt = to_double(k, v); }},
      {"solver.fp_inner_tol", [](RunConfig& c, auto& k, auto& v) { c.solver.fp_inner_tol = to_double(k, v); }},
      {"solver.fp_outer_tol", [](RunConfig& c, auto& k, auto& v) { c.solver.fp_outer_tol = to_double(k, v); }},
      {"solver.max_inner_iters", [](RunConfig& c, auto& k, auto& v) { c.solver.max_inner_iters = to_int(k, v); }},
      {"solver.max_outer_iters", [](RunConfig& c, auto& k, auto& v) { c.solver.max_outer_iters = to_int(k, v); }},
      {"solver.M_bound", [](RunConfig& c, auto& k, auto& v) { c.solver.M_bound = to_double(k, v); }},
      {"solver.T_bisect_max", [](RunConfig& c, auto& k, auto& v) { c.solver.T_bisect_max = to_int(k, v); }},
      {"solver.relaxation", [](RunConfig& c, auto& k, auto& v) { c.solver.relaxation = to_double(k, v); }},
      {"solver.det_floor", [](RunConfig& c, auto& k, auto& v) { c.solver.det_floor = to_double(k, v); }},
      {"solver.threads", [](RunConfig& c, auto& k, auto& v) { c.solver.threads = to_int(k, v); }},
      {"solver.coefficient_gradient",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "projection") c.solver.coefficient_gradient = CoefficientGradient::Projection;
         else if (v == "hessian") c.solver.coefficient_gradient = CoefficientGradient::Hessian;
         else throw ParseError("invalid value for key '" + k + "': '" + v + "'");
       }},
      {"initial.v0", [](RunConfig& c, auto& k, auto& v) { c.initial.v0 = to_preset(k, v); }},
      {"initial.xi1", [](RunConfig& c, auto& k, auto& v) { c.initial.xi1 = to_preset(k, v); }},
      {"initial.p0", [](RunConfig& c, auto& k, auto& v) { c.initial.p0 = to_preset(k, v); }},
      {"initial.dtp0", [](RunConfig& c, auto& k, auto& v) { c.initial.dtp0 = to_preset(k, v); }},
      {"initial.dttp0", [](RunConfig& c, auto& k, auto& v) { c.initial.dttp0 = to_preset(k, v); }},
      {"initial.strictness",
       [](RunConfig& c, auto& k, auto& v) {
         try {
           c.initial.strictness = parse_strictness(v);
         } catch (const Error&) {
           throw ParseError("invalid value for key '" + k + "': '" + v + "'");
         }
       }},
      {"initial.compat_tol", [](RunConfig& c, auto& k, auto& v) { c.initial.compat_tol = to_double(k, v); }},
      {"inflow.v_in", [](RunConfig& c, auto& k, auto& v) { c.inflow = to_preset(k, v); }},
      {"output.dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
      {"output.snapshots", [](RunConfig& c, auto& k, auto& v) { c.write_snapshots = to_bool(k, v); }},
      {"output.infsup_threshold", [](RunConfig& c, auto& k, auto& v) { c.infsup_threshold = to_double(k, v); }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  if (mesh_path.empty()) throw PreconditionError("mesh.path is empty");
  if (degree != 1 && degree != 2) throw PreconditionError("mesh.degree must be 1 or 2");
  if (quad_order < 0) throw PreconditionError("mesh.quad_order must be >= 0");
  if (!(initial.compat_tol > 0.0)) throw PreconditionError("initial.compat_tol must be positive");
  if (!(infsup_threshold >= 0.0)) throw PreconditionError("output.infsup_threshold must be >= 0");
  if (output_dir.empty()) throw PreconditionError("output.dir is empty");
  material.validate();
  solver.validate();
}

std::filesystem::path RunConfig::resolve(const std::string& p) const {
  std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path;
  return base_dir / path;
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value, got '" + line + "'");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError("unknown config key '" + key + "' (line " + std::to_string(lineno) + ")");
    it->second(c, key, value);
  }
  return c;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'");
  RunConfig c = parse_config(in);
  c.base_dir = path.parent_path();
  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[mesh]\n"
    << "path = " << c.mesh_path << "\n"
    << "degree = " << c.degree << "\n"
    << "quad_order = " << c.quad_order << "\n\n";
  o << "[material]\n"
    << "rho_f = " << fmt(c.material.rho_f) << "\n"
    << "rho_s = " << fmt(c.material.rho_s) << "\n"
    << "mu = " << fmt(c.material.mu) << "\n"
    << "mu_s = " << fmt(c.material.mu_s) << "\n"
    << "lambda_s = " << fmt(c.material.lambda_s) << "\n"
    << "C = " << fmt(c.material.C_penalty) << "\n\n";
  const auto& s = c.solver;
  o << "[solver]\n"
    << "T = " << fmt(s.T) << "\n"
    << "dt = " << fmt(s.dt) << "\n"
    << "fp_inner_tol = " << fmt(s.fp_inner_tol) << "\n"
    << "fp_outer_tol = " << fmt(s.fp_outer_tol) << "\n"
    << "max_inner_iters = " << s.max_inner_iters << "\n"
    << "max_outer_iters = " << s.max_outer_iters << "\n"
    << "M_bound = " << fmt(s.M_bound) << "\n"
    << "T_bisect_max = " << s.T_bisect_max << "\n"
    << "relaxation = " << fmt(s.relaxation) << "\n"
    << "det_floor = " << fmt(s.det_floor) << "\n"
    << "threads = " << s.threads << "\n"
    << "coefficient_gradient = " << gradient_name(s.coefficient_gradient) << "\n\n";
  o << "[initial]\n"
    << "v0 = " << c.initial.v0.str() << "\n"
    << "xi1 = " << c.initial.xi1.str() << "\n"
    << "p0 = " << c.initial.p0.str() << "\n";
  if (c.initial.dtp0) o << "dtp0 = " << c.initial.dtp0->str() << "\n";
  if (c.initial.dttp0) o << "dttp0 = " << c.initial.dttp0->str() << "\n";
  o << "strictness = " << to_string(c.initial.strictness) << "\n"
    << "compat_tol = " << fmt(c.initial.compat_tol) << "\n\n";
  o << "[inflow]\n"
    << "v_in = " << c.inflow.str() << "\n\n";
  o << "[output]\n"
    << "dir = " << c.output_dir << "\n"
    << "snapshots = " << (c.write_snapshots ? "true" : "false") << "\n"
    << "infsup_threshold = " << fmt(c.infsup_threshold) << "\n";
  return o.str();
}

int effective_threads(const RunConfig& c) { return resolve_threads(c.solver.threads); }

}  // namespace fsi
