#pragma once

#include <cstdint>
#include <ostream>

namespace fsi {

struct SelftestReport {
  int samples = 0;
  double c_max_rel = 0.0;    // analytic c against differences of the first Piola stress
  double d_max_rel = 0.0;    // analytic d against differences of (det F - 1) cof F
  double dc_max_rel = 0.0;   // directional derivative of c
  double dd_max_rel = 0.0;   // directional derivative of d
  double c_symmetry = 0.0;   // max |c_{iajb} - c_{jbia}|
  double seconds = 0.0;
};

/// Central differences on random displacement gradients with |H|_F <= h_max.
SelftestReport tensor_selftest(int samples = 100, double h_max = 0.3, std::uint64_t seed = 12345);

void print_selftest(const SelftestReport& r, std::ostream& out);

}  // namespace fsi
