#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "fsi/discretization.hpp"

namespace fsi {

enum class Support { Fluid, Solid, All };

const char* to_string(Support s);

/// Nodal vector field on the unified space, dof = 3 * node + component.
/// Nodes outside the support carry zeros.
struct VectorField {
  Eigen::VectorXd values;
  Support support = Support::All;
};

/// Whether a node belongs to the support (interface nodes belong to both regions).
bool node_in_support(const FunctionSpace& space, int node, Support s);

VectorField interpolate(const Discretization& d, const std::function<Vec3(const Vec3&)>& fn, Support s);

/// P1 pressure values on the fluid vertices, ordered by Discretization::pressure_vertex.
Eigen::VectorXd interpolate_pressure(const Discretization& d, const std::function<double(const Vec3&)>& fn);

/// Named analytic data: zero, shear(a), dilation(a), constant(c) or file:<path>.
struct Preset {
  std::string kind = "zero";
  std::vector<double> args;
  std::string path;

  std::string str() const;
};

Preset parse_preset(const std::string& text);

/// Vector preset evaluated at the nodes of the support. File presets read a
/// snapshot CSV (dof_index,x,y,z,component,value).
VectorField vector_preset(const Discretization& d, const Preset& p, Support s);
/// Scalar preset for pressures: zero or constant(c), or a file with one value per pressure dof.
Eigen::VectorXd pressure_preset(const Discretization& d, const Preset& p);

}  // namespace fsi
