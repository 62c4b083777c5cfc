#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "fsi/config.hpp"

namespace fsi {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNonContraction = 2, kExitIncompatible = 3 };

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::filesystem::path output_dir;
};

/// Solve, recover pressure, build ledgers and write every output file.
/// Never throws for configuration or solver failures; those become exit
/// codes plus a status.json failure report in the output directory.
RunOutcome run(const RunConfig& cfg, std::ostream& log);
/// Loads the config first; a parse error is reported with exit code 1.
RunOutcome run_file(const std::filesystem::path& config_path, std::ostream& log);

/// Compatibility report only. Exit 0 when the data passes at the configured
/// strictness, 3 when it does not, 1 on configuration errors.
int check_file(const std::filesystem::path& config_path, std::ostream& out);

/// Inf-sup report only. Exit 0 when beta_h exceeds the threshold, 3 otherwise.
int infsup_file(const std::filesystem::path& config_path, std::ostream& out);

}  // namespace fsi
