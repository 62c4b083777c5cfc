#include "fsi/fields.hpp"

#include <fstream>
#include <sstream>

namespace fsi {

const char* to_string(Support s) {
  switch (s) {
    case Support::Fluid: return "fluid";
    case Support::Solid: return "solid";
    case Support::All: return "all";
  }
  return "?";
}

bool node_in_support(const FunctionSpace& space, int node, Support s) {
  if (s == Support::All) return true;
  return space.in_region(node, s == Support::Fluid ? Region::Fluid : Region::Solid);
}

VectorField interpolate(const Discretization& d, const std::function<Vec3(const Vec3&)>& fn, Support s) {
  VectorField f;
  f.support = s;
  f.values = Eigen::VectorXd::Zero(d.num_dofs());
  for (int n = 0; n < d.space.num_nodes(); ++n) {
    if (node_in_support(d.space, n, s)) f.values.segment<3>(3 * n) = fn(d.space.node_coords[n]);
  }
  return f;
}

Eigen::VectorXd interpolate_pressure(const Discretization& d, const std::function<double(const Vec3&)>& fn) {
  Eigen::VectorXd p(d.num_pressure());
  for (int k = 0; k < d.num_pressure(); ++k) p[k] = fn(d.mesh.vertices[d.pressure_vertex[k]]);
  return p;
}

std::string Preset::str() const {
  if (kind == "file") return "file:" + path;
  if (args.empty()) return kind;
  std::ostringstream os;
  os.precision(17);
  os << kind << '(';
  for (std::size_t i = 0; i < args.size(); ++i) os << (i ? "," : "") << args[i];
  os << ')';
  return os.str();
}

Preset parse_preset(const std::string& text) {
  Preset p;
  if (text.rfind("file:", 0) == 0) {
    p.kind = "file";
    p.path = text.substr(5);
    if (p.path.empty()) throw ParseError("empty file path in preset '" + text + "'");
    return p;
  }
  const auto open = text.find('(');
  p.kind = text.substr(0, open);
  if (open != std::string::npos) {
    const auto close = text.rfind(')');
    if (close == std::string::npos || close < open) throw ParseError("unbalanced parentheses in preset '" + text + "'");
    std::stringstream ss(text.substr(open + 1, close - open - 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        p.args.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ParseError("bad number '" + item + "' in preset '" + text + "'");
      }
    }
  }
  auto want = [&](std::size_t n) {
    if (p.args.size() != n) throw ParseError("preset '" + p.kind + "' expects " + std::to_string(n) + " argument(s)");
  };
  if (p.kind == "zero") want(0);
  else if (p.kind == "shear" || p.kind == "dilation") want(1);
  else if (p.kind == "constant") {
    if (p.args.size() != 1 && p.args.size() != 3) throw ParseError("preset 'constant' expects 1 or 3 arguments");
  } else if (p.kind == "uniform") want(3);
  else throw ParseError("unknown preset '" + p.kind + "'");
  return p;
}

namespace {

std::vector<std::pair<int, double>> read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open field file " + path.string());
  std::vector<std::pair<int, double>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cols;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 6) throw ParseError("field file " + path.string() + ": expected 6 columns in '" + line + "'");
    out.emplace_back(std::stoi(cols[0]), std::stod(cols[5]));
  }
  return out;
}

}  // namespace

VectorField vector_preset(const Discretization& d, const Preset& p, Support s) {
  if (p.kind == "file") {
    VectorField f;
    f.support = s;
    f.values = Eigen::VectorXd::Zero(d.num_dofs());
    for (const auto& [dof, v] : read_snapshot(p.path)) {
      if (dof < 0 || dof >= d.num_dofs()) throw ParseError("field file " + p.path + ": dof " + std::to_string(dof) + " out of range");
      if (node_in_support(d.space, dof / 3, s)) f.values[dof] = v;
    }
    return f;
  }
  const double a = p.args.empty() ? 0.0 : p.args[0];
  std::function<Vec3(const Vec3&)> fn;
  if (p.kind == "zero") fn = [](const Vec3&) { return Vec3::Zero().eval(); };
  else if (p.kind == "shear") fn = [a](const Vec3& x) { return Vec3(a * x[1], 0.0, 0.0); };
  else if (p.kind == "dilation") fn = [a](const Vec3& x) { return (a * x).eval(); };
  else if (p.kind == "constant" || p.kind == "uniform") {
    const Vec3 c = p.args.size() == 3 ? Vec3(p.args[0], p.args[1], p.args[2]) : Vec3::Constant(a);
    fn = [c](const Vec3&) { return c; };
  } else {
    throw ParseError("preset '" + p.kind + "' is not a vector field");
  }
  return interpolate(d, fn, s);
}

Eigen::VectorXd pressure_preset(const Discretization& d, const Preset& p) {
  if (p.kind == "zero") return Eigen::VectorXd::Zero(d.num_pressure());
  if (p.kind == "constant" && p.args.size() == 1) return Eigen::VectorXd::Constant(d.num_pressure(), p.args[0]);
  if (p.kind == "file") {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d.num_pressure());
    for (const auto& [dof, v] : read_snapshot(p.path)) {
      if (dof < 0 || dof >= d.num_pressure()) throw ParseError("pressure file " + p.path + ": dof " + std::to_string(dof) + " out of range");
      out[dof] = v;
    }
    return out;
  }
  throw ParseError("preset '" + p.str() + "' is not a pressure field");
}

}  // namespace fsi
