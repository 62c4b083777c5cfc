#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fsi/config.hpp"
#include "fsi/run.hpp"

namespace fs = std::filesystem;

namespace {

const char* kBase = R"(
[mesh]
path = two_cube.mesh
degree = 2

[material]
rho_f = 1
rho_s = 1.5
mu = 0.02
mu_s = 1
lambda_s = 2
C = 10

[solver]
T = 0.015
dt = 0.005
M_bound = 10
T_bisect_max = 0

[initial]
v0 = zero
xi1 = zero
p0 = zero

[inflow]
v_in = zero

[output]
dir = out
)";

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh scratch directory per test, with the reference mesh copied in.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fsi_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::copy_file(fs::path(FSI_TEST_DATA_DIR) / "two_cube.mesh", dir / "two_cube.mesh");
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

std::string with(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

TEST(Config, RoundTripIsIdentityOnCanonicalForm) {
  const auto a = fsi::parse_config_string(with(kBase, "v0 = zero", "v0 = shear(0.25)"));
  const std::string s1 = fsi::serialize_config(a);
  const auto b = fsi::parse_config_string(s1);
  EXPECT_EQ(fsi::serialize_config(b), s1);
  EXPECT_EQ(b.material.rho_s, 1.5);
  EXPECT_EQ(b.material.lambda_s, 2.0);
  EXPECT_EQ(b.solver.dt, 0.005);
  EXPECT_EQ(b.initial.v0.kind, "shear");
  ASSERT_EQ(b.initial.v0.args.size(), 1u);
  EXPECT_EQ(b.initial.v0.args[0], 0.25);
}

TEST(Config, AwkwardNumbersSurviveRoundTrip) {
  auto c = fsi::parse_config_string(kBase);
  c.material.mu = 0.1 + 0.2;
  c.solver.fp_outer_tol = 3.0e-17;
  const auto back = fsi::parse_config_string(fsi::serialize_config(c));
  EXPECT_EQ(back.material.mu, c.material.mu);
  EXPECT_EQ(back.solver.fp_outer_tol, c.solver.fp_outer_tol);
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    fsi::parse_config_string(with(kBase, "M_bound = 10", "M_bund = 10"));
    FAIL() << "expected ParseError";
  } catch (const fsi::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("solver.M_bund"), std::string::npos) << e.what();
  }
}

TEST(Config, BadNumberIsNamed) {
  try {
    fsi::parse_config_string(with(kBase, "mu = 0.02", "mu = 0.0x2"));
    FAIL() << "expected ParseError";
  } catch (const fsi::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("mu"), std::string::npos) << e.what();
  }
}

TEST(Run, MalformedKeyExitsOneAndNamesKey) {
  const auto dir = scratch("badkey");
  std::ostringstream log;
  const auto out = fsi::run_file(write_config(dir, with(kBase, "[mesh]", "[mesh]\nrefine = 2")), log);
  EXPECT_EQ(out.exit_code, fsi::kExitConfig);
  EXPECT_NE(out.message.find("mesh.refine"), std::string::npos) << out.message;
}

TEST(Run, InvalidMaterialExitsOne) {
  const auto dir = scratch("badmat");
  std::ostringstream log;
  const auto out = fsi::run_file(write_config(dir, with(kBase, "mu = 0.02", "mu = -1")), log);
  EXPECT_EQ(out.exit_code, fsi::kExitConfig);
  EXPECT_TRUE(fs::exists(dir / "out" / "status.json"));
}

TEST(Run, ZeroPresetGivesZeroFields) {
  const auto dir = scratch("zero");
  std::ostringstream log;
  const auto out = fsi::run_file(write_config(dir, kBase), log);
  ASSERT_EQ(out.exit_code, fsi::kExitOk) << out.message;
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir / "out" / "snapshots")) {
    const auto lines = data_lines(read(e.path()));
    ASSERT_GT(lines.size(), 1u);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const std::string value = lines[i].substr(lines[i].rfind(',') + 1);
      EXPECT_EQ(std::stod(value), 0.0) << e.path() << ": " << lines[i];
    }
    ++files;
  }
  // velocity and displacement at 4 nodes, pressure at 3 midpoints
  EXPECT_EQ(files, 4 + 4 + 3);
  EXPECT_NE(read(dir / "out" / "status.json").find("\"exit_code\": 0"), std::string::npos);
}

TEST(Run, TimeseriesHasOneRowPerRecordedTimeAndMetric) {
  const auto dir = scratch("series");
  std::ostringstream log;
  const auto out = fsi::run_file(
      write_config(dir, with(with(kBase, "v0 = zero", "v0 = uniform(0.001,0,0)"), "xi1 = zero", "xi1 = uniform(0.001,0,0)")),
      log);
  ASSERT_EQ(out.exit_code, fsi::kExitOk) << out.message;
  const std::string csv = read(dir / "out" / "timeseries.csv");
  EXPECT_EQ(csv.rfind("# schema fsi.timeseries/1\n", 0), 0u);
  const auto lines = data_lines(csv);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0], "step,time,field,metric,value");
  std::map<std::string, int> count;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string step, time, field, metric;
    std::getline(row, step, ',');
    std::getline(row, time, ',');
    std::getline(row, field, ',');
    std::getline(row, metric, ',');
    ++count[field + "/" + metric];
  }
  ASSERT_FALSE(count.empty());
  for (const auto& [key, n] : count) {
    if (key.rfind("pressure", 0) == 0)
      EXPECT_EQ(n, 3) << key;
    else
      EXPECT_EQ(n, 4) << key;
  }
}

TEST(Run, RepeatedSingleThreadedRunsAreByteIdentical) {
  const std::string text = with(with(kBase, "v0 = zero", "v0 = uniform(0.001,0.0005,0)"), "xi1 = zero",
                                "xi1 = uniform(0.001,0.0005,0)");
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    const auto dir = scratch("repeat" + std::to_string(pass));
    std::ostringstream log;
    const auto out = fsi::run_file(write_config(dir, text), log);
    ASSERT_EQ(out.exit_code, fsi::kExitOk) << out.message;
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir / "out"))
      if (e.is_regular_file()) files[fs::relative(e.path(), dir / "out").string()] = read(e.path());
    if (pass == 0) {
      first = files;
      continue;
    }
    ASSERT_EQ(files.size(), first.size());
    for (const auto& [name, body] : files) EXPECT_TRUE(body == first[name]) << name << " differs";
  }
}

TEST(Run, BreakdownForLargeTimeWindowExitsTwoWithHeaderOnlyLedgers) {
  // Data large enough that the maps degenerate before the window ends; no halvings allowed.
  const auto dir = scratch("large_t");
  std::string text = with(with(kBase, "v0 = zero", "v0 = uniform(0.05,0,0)"), "xi1 = zero", "xi1 = uniform(0.05,0,0)");
  text = with(with(text, "T = 0.015", "T = 2"), "dt = 0.005", "dt = 0.2");
  std::ostringstream log;
  const auto out = fsi::run_file(write_config(dir, text), log);
  EXPECT_EQ(out.exit_code, fsi::kExitNonContraction);
  const std::string status = read(dir / "out" / "status.json");
  EXPECT_NE(status.find("\"status\": \"non_contraction\""), std::string::npos) << status;
  for (const char* name : {"ledger_energy.csv", "ledger_iterations.csv", "ledger_membership.csv", "ledger_interface.csv",
                           "timeseries.csv"}) {
    const auto lines = data_lines(read(dir / "out" / name));
    EXPECT_EQ(lines.size(), 1u) << name;
  }
  EXPECT_FALSE(fs::exists(dir / "out" / "snapshots" / "velocity_0000.csv"));
}

TEST(Run, IncompatibleDataExitsThree) {
  const auto dir = scratch("incompatible");
  std::string text = with(kBase, "v0 = zero", "v0 = uniform(0.001,0,0)");
  text = with(text, "p0 = zero", "p0 = constant(1)\nstrictness = interface");
  // v0 and xi1 disagree on the interface.
  std::ostringstream log;
  const auto out = fsi::run_file(write_config(dir, text), log);
  EXPECT_EQ(out.exit_code, fsi::kExitIncompatible) << out.message;
  EXPECT_TRUE(fs::exists(dir / "out" / "ledger_compatibility.csv"));
  EXPECT_EQ(data_lines(read(dir / "out" / "ledger_compatibility.csv")).size(), 10u);
}

TEST(Check, ZeroDataPasses) {
  const auto dir = scratch("check");
  std::ostringstream report;
  EXPECT_EQ(fsi::check_file(write_config(dir, kBase), report), fsi::kExitOk) << report.str();
  EXPECT_FALSE(report.str().empty());
}

TEST(InfSup, ReferencePairPasses) {
  const auto dir = scratch("infsup");
  std::ostringstream report;
  EXPECT_EQ(fsi::infsup_file(write_config(dir, kBase), report), fsi::kExitOk) << report.str();
  const auto dir1 = scratch("infsup_p1");
  std::ostringstream report1;
  EXPECT_EQ(fsi::infsup_file(write_config(dir1, with(kBase, "degree = 2", "degree = 1")), report1),
            fsi::kExitIncompatible)
      << report1.str();
}

}  // namespace
