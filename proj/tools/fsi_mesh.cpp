// Writes the two-cube reference mesh: fsi_mesh <n> <output>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "fsi_fixtures/two_cube.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: fsi_mesh <n> <output>\n";
    return 1;
  }
  try {
    const auto mesh = fsi::fixtures::two_cube(std::atoi(argv[1]));
    std::ofstream out(argv[2]);
    fsi::write_mesh(out, mesh);
    return out ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
