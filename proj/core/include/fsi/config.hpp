#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fsi/compatibility.hpp"
#include "fsi/constitutive.hpp"
#include "fsi/fields.hpp"
#include "fsi/solvers.hpp"

namespace fsi {

struct InitialSpec {
  Preset v0;
  Preset xi1;
  Preset p0;
  std::optional<Preset> dtp0, dttp0;
  Strictness strictness = Strictness::Interface;
  double compat_tol = 1e-8;
};

/// Everything one `fsi run` needs. Relative paths resolve against base_dir.
struct RunConfig {
  std::string mesh_path = "two_cube.mesh";
  int degree = 2;
  int quad_order = 0;
  MaterialParams material;
  SolverConfig solver;
  InitialSpec initial;
  Preset inflow;  // v_in on gamma_in
  std::string output_dir = "out";
  bool write_snapshots = true;
  double infsup_threshold = 1e-3;
  std::filesystem::path base_dir;  // not serialized

  void validate() const;
  std::filesystem::path resolve(const std::string& p) const;
};

/// INI-style text: [section] headers, key = value lines, '#' or ';' comments.
/// Unknown sections or keys raise ParseError naming the key.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: fixed section and key order, numbers in %.17g.
std::string serialize_config(const RunConfig& c);

/// Applies FSI_THREADS when set.
int effective_threads(const RunConfig& c);

}  // namespace fsi
