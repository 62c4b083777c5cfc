#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fsi {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Fourth-order coefficient tensor stored flat, index order (i, alpha, j, beta).
using Tensor4 = std::array<double, 81>;

constexpr int t4(int i, int alpha, int j, int beta) {
  return ((i * 3 + alpha) * 3 + j) * 3 + beta;
}

enum class Region { Fluid, Solid };

inline const char* to_string(Region r) { return r == Region::Fluid ? "fluid" : "solid"; }

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant of an input (mesh, field, history) does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A determinant dropped below the configured floor. Carries the offending value.
class DetFloorError : public Error {
 public:
  DetFloorError(const std::string& what, double value, int cell, int qp)
      : Error(what), value_(value), cell_(cell), qp_(qp) {}
  double value() const { return value_; }
  int cell() const { return cell_; }
  int qp() const { return qp_; }

 private:
  double value_;
  int cell_;
  int qp_;
};

class SolveError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsi
