// SPDX-License-Identifier: MIT
// Black-box tests of the command-line binary, located via the TWISTOPT_BIN
// environment variable set by the build system.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "twistopt/results.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

std::string binary_path() {
  const char* bin = std::getenv("TWISTOPT_BIN");
  REQUIRE_MESSAGE(bin != nullptr,
                  "TWISTOPT_BIN must point at the built binary");
  return bin;
}

CliResult run_cli(const std::string& args) {
  fs::path capture = fs::temp_directory_path() / "twistopt_cli_capture.txt";
  std::string cmd =
      binary_path() + " " + args + " > " + capture.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  CliResult r;
#ifdef WIFEXITED
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  r.exit_code = status;
#endif
  std::ifstream in(capture);
  r.output.assign(std::istreambuf_iterator<char>(in),
                  std::istreambuf_iterator<char>());
  return r;
}

fs::path fresh_dir(const char* tag) {
  fs::path dir = fs::temp_directory_path() / (std::string("twistopt_cli_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<twistopt::results::ResultRow> read_rows(const fs::path& csv) {
  std::vector<twistopt::results::ResultRow> rows;
  std::ifstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    auto row = twistopt::results::parse_csv(line);
    if (row) rows.push_back(*row);
  }
  return rows;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("version and help respond without doing work") {
  auto version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.output.find("0.1.0") != std::string::npos);

  auto help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("optimize") != std::string::npos);
  CHECK(help.output.find("noise-grid") != std::string::npos);
  CHECK(help.output.find("circuit-noise") != std::string::npos);
  CHECK(help.output.find("bias-variance") != std::string::npos);
  CHECK(help.output.find("hyper-study") != std::string::npos);
}

TEST_CASE("bad protocol labels fail with a diagnostic") {
  auto dir = fresh_dir("bad_label");
  auto r = run_cli("optimize --n-qubits 4 --ansatz NOT_A_LABEL --delta-phi 0.7 "
                   "--out " + dir.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("small optimize run writes csv, manifest, and parameters") {
  auto dir = fresh_dir("smoke");
  std::string cmd =
      "optimize --n-qubits 4 --ansatz AAT_0_0 --ansatz AAT_1_1 "
      "--delta-phi 0.7 --quad-nodes 25 --eps 1e-8 --experiment smoke --out " +
      dir.string();
  auto r = run_cli(cmd);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("wrote") != std::string::npos);

  auto rows = read_rows(dir / "smoke.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ansatz == "AAT_0_0");
  CHECK(rows[1].ansatz == "AAT_1_1");
  for (const auto& row : rows) {
    CHECK(row.n == 4);
    CHECK(row.delta_phi == 0.7);
    CHECK(row.bmse_ratio > 0.0);
    CHECK(row.bmse_ratio < 1.0);
    CHECK(row.status == "ok");
  }
  // Twisting helps beyond the classical echo at this size.
  CHECK(rows[1].bmse_ratio < rows[0].bmse_ratio);

  std::string manifest = read_file(dir / "smoke.manifest");
  CHECK(manifest.find("experiment=smoke") != std::string::npos);
  CHECK(manifest.find("n_qubits=4") != std::string::npos);
  CHECK(manifest.find("version=") != std::string::npos);
  CHECK(manifest.find("seed=") != std::string::npos);

  CHECK(fs::exists(dir / "smoke.times"));
  auto params =
      twistopt::results::load_params((dir / "smoke_params").string(),
                                     "AAT_1_1", 0.7);
  CHECK(params.has_value());
  fs::remove_all(dir);
}

TEST_CASE("reruns resume instead of duplicating rows") {
  auto dir = fresh_dir("resume");
  std::string cmd =
      "optimize --n-qubits 4 --ansatz AAT_1_0 --delta-phi 0.65 "
      "--quad-nodes 25 --eps 1e-8 --experiment resume --out " + dir.string();
  auto first = run_cli(cmd);
  CHECK(first.exit_code == 0);
  auto rows_before = read_rows(dir / "resume.csv");
  REQUIRE(rows_before.size() == 1);

  auto second = run_cli(cmd);
  CHECK(second.exit_code == 0);
  auto rows_after = read_rows(dir / "resume.csv");
  REQUIRE(rows_after.size() == 1);
  CHECK(rows_after[0].bmse_ratio == rows_before[0].bmse_ratio);
  CHECK(rows_after[0].a_opt == rows_before[0].a_opt);
  fs::remove_all(dir);
}

TEST_CASE("identical configurations reproduce identical tables") {
  auto dir_a = fresh_dir("det_a");
  auto dir_b = fresh_dir("det_b");
  std::string common =
      "optimize --n-qubits 4 --ansatz AAT_1_1 --delta-phi 0.74 "
      "--quad-nodes 25 --eps 1e-8 --experiment det --out ";
  CHECK(run_cli(common + dir_a.string()).exit_code == 0);
  CHECK(run_cli(common + dir_b.string()).exit_code == 0);
  CHECK(read_file(dir_a / "det.csv") == read_file(dir_b / "det.csv"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("a noise-free grid cell reproduces the noiseless optimum") {
  auto dir = fresh_dir("grid");
  std::string opt_cmd =
      "optimize --n-qubits 4 --ansatz AAT_1_1 --delta-phi 0.74 "
      "--quad-nodes 25 --eps 1e-8 --experiment grid --out " + dir.string();
  REQUIRE(run_cli(opt_cmd).exit_code == 0);
  auto opt_rows = read_rows(dir / "grid.csv");
  REQUIRE(opt_rows.size() == 1);

  // Grid runs read the optimized parameters from their own experiment's
  // directory; reuse the sweep's output under a fresh experiment name.
  fs::copy(dir / "grid_params", dir / "gridcells_params",
           fs::copy_options::recursive);
  std::string grid_cmd =
      "noise-grid --n-qubits 4 --ansatz AAT_1_1 --delta-phi 0.74 "
      "--quad-nodes 25 --c1-grid 0.0 --c2-grid 0.0 --experiment gridcells "
      "--out " + dir.string();
  auto r = run_cli(grid_cmd);
  CHECK(r.exit_code == 0);

  auto rows = read_rows(dir / "gridcells.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].c1 == 0.0);
  CHECK(rows[0].c2 == 0.0);
  CHECK(rows[0].status == "ok");
  CHECK(std::abs(rows[0].bmse_ratio - opt_rows[0].bmse_ratio) < 1e-9);
  fs::remove_all(dir);
}

TEST_CASE("noise grids need optimized parameters first") {
  auto dir = fresh_dir("grid_missing");
  auto r = run_cli(
      "noise-grid --n-qubits 4 --ansatz AAT_1_1 --delta-phi 0.74 "
      "--c1-grid 0.1 --c2-grid 0.0 --experiment missing --out " + dir.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
  CHECK(r.output.find("parameters") != std::string::npos);
  fs::remove_all(dir);
}
