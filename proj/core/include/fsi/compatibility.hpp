#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsi/constitutive.hpp"
#include "fsi/discretization.hpp"
#include "fsi/fields.hpp"

namespace fsi {

/// Truncated Taylor polynomial of total degree <= 4 in three variables around
/// a point. Products drop terms above degree 4, so any derivative of order k
/// of a product is exact at the point as long as k plus the number of later
/// differentiations stays within 4.
class Jet {
 public:
  static constexpr int kOrder = 4;
  static constexpr int kSize = 35;

  Jet() { c_.fill(0.0); }
  static Jet constant(double v);
  /// v + g . (x - x0)
  static Jet affine(double v, const Vec3& g);

  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  Jet derivative(int axis) const;

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator*(double s) const;
  Jet& operator+=(const Jet& o);

  /// Index of the monomial x^a y^b z^c.
  static int index(int a, int b, int c);

 private:
  std::array<double, kSize> c_;
};

using JetVec = std::array<Jet, 3>;
using JetMat = std::array<Jet, 9>;  // row-major (i, j)

enum class Strictness { Off, Interface, All };
enum class Severity { Error, Warn };

Strictness parse_strictness(const std::string& s);
const char* to_string(Strictness s);

struct ConditionResult {
  int index = 0;
  std::string domain;  // "gamma_c" or "fluid"
  bool evaluated = false;
  double residual = 0.0;
  double tolerance = 0.0;
  Severity severity = Severity::Error;
  bool pass = true;
};

struct CompatibilityInput {
  VectorField v0;   // on the fluid
  VectorField xi1;  // on the solid
  Eigen::VectorXd p0;
  std::optional<Eigen::VectorXd> dtp0, dttp0;
};

struct CompatibilityReport {
  std::array<ConditionResult, 9> conditions;
  std::map<std::string, double> intermediates;  // L2 norms over the interface of S1..S4, E1, E2
  double data_scale = 0.0;

  /// Whether the data is acceptable at the given strictness. Off accepts
  /// everything; Interface requires condition 1; All requires every evaluated
  /// error-severity condition.
  bool passed(Strictness s) const;
};

CompatibilityReport check_compatibility(const Discretization& d, const CompatibilityInput& in, const MaterialParams& p,
                                        double rel_tol = 1e-8);

}  // namespace fsi
