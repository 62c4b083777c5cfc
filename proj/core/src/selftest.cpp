#include "fsi/selftest.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "fsi/constitutive.hpp"
#include "fsi/output.hpp"

namespace fsi {
namespace {

double rel_diff(const Tensor4& a, const Tensor4& b) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 81; ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

template <class StressFn>
Tensor4 fd_tangent(const StressFn& stress, const Mat3& H, double eps) {
  Tensor4 out{};
  for (int j = 0; j < 3; ++j)
    for (int b = 0; b < 3; ++b) {
      Mat3 E = Mat3::Zero();
      E(j, b) = eps;
      const Mat3 dP = (stress(H + E) - stress(H - E)) / (2.0 * eps);
      for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a) out[t4(i, a, j, b)] = dP(i, a);
    }
  return out;
}

template <class TensorFn>
Tensor4 fd_direction(const TensorFn& coeff, const Mat3& H, const Mat3& G, double eps) {
  const Tensor4 p = coeff(H + eps * G), m = coeff(H - eps * G);
  Tensor4 out{};
  for (int k = 0; k < 81; ++k) out[k] = (p[k] - m[k]) / (2.0 * eps);
  return out;
}

}  // namespace

SelftestReport tensor_selftest(int samples, double h_max, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), radius(0.0, 1.0);
  auto random_matrix = [&](double norm) {
    Mat3 A;
    for (int k = 0; k < 9; ++k) A.data()[k] = unit(rng);
    return (norm * A / A.norm()).eval();
  };
  const double mu_s = 1.3, lambda_s = 0.7, eps = 1e-5;
  SelftestReport r;
  r.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const Mat3 H = random_matrix(h_max * radius(rng));
    const Mat3 G = random_matrix(1.0);
    const Tensor4 c = svk_coefficients(H, mu_s, lambda_s);
    const Tensor4 d = quasi_inc_coefficients(H);
    r.c_max_rel = std::max(r.c_max_rel, rel_diff(c, fd_tangent([&](const Mat3& X) { return first_piola(X, mu_s, lambda_s); }, H, eps)));
    r.d_max_rel = std::max(r.d_max_rel, rel_diff(d, fd_tangent([](const Mat3& X) { return quasi_inc_stress(X); }, H, eps)));
    r.dc_max_rel = std::max(
        r.dc_max_rel, rel_diff(svk_derivative(H, G, mu_s, lambda_s),
                               fd_direction([&](const Mat3& X) { return svk_coefficients(X, mu_s, lambda_s); }, H, G, eps)));
    r.dd_max_rel = std::max(r.dd_max_rel, rel_diff(quasi_inc_derivative(H, G),
                                                   fd_direction([](const Mat3& X) { return quasi_inc_coefficients(X); }, H, G, eps)));
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a)
        for (int j = 0; j < 3; ++j)
          for (int b = 0; b < 3; ++b) r.c_symmetry = std::max(r.c_symmetry, std::abs(c[t4(i, a, j, b)] - c[t4(j, b, i, a)]));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void print_selftest(const SelftestReport& r, std::ostream& out) {
  out << "samples " << r.samples << "\n"
      << "c_max_rel_error " << format_double(r.c_max_rel) << "\n"
      << "d_max_rel_error " << format_double(r.d_max_rel) << "\n"
      << "dc_max_rel_error " << format_double(r.dc_max_rel) << "\n"
      << "dd_max_rel_error " << format_double(r.dd_max_rel) << "\n"
      << "c_symmetry_defect " << format_double(r.c_symmetry) << "\n";
}

}  // namespace fsi
