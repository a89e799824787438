#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rvs/eos_state.hpp"

namespace rvs::cli {

using ojson = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kIo = 3 };

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

struct Grid {
  std::string param;  // v_bar | c_bar | epsilon | M | eps_c
  double min = 0.0, max = 0.0;
  int count = 2;
  bool log = false;
  std::vector<double> nodes() const;
};

// Background parameters before validation; c_bar only for the linear eos.
struct SheetParams {
  ojson eos;  // {"kind": "linear", "sigma": ...} or {"kind": "gamma_law", "K": ..., "gamma": ...}
  double epsilon = 0.0;
  double rho_bar = 1.0;
  std::optional<double> c_bar, v_bar, M;
};

struct RunConfig {
  SheetParams sheet;
  std::vector<Grid> grids;
  int scan_res = 200;
  double scan_gamma = 0.0;
  double scan_tol_factor = 1.0;
  double scan_max_cells = 2.0;
  int suite_samples = 200;
  std::optional<ojson> frozen;
  std::optional<std::string> out;
  std::uint64_t seed = 1;
};

// Throws CliError(kIo) when unreadable, CliError(kInvalid) on schema errors.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const ojson& j, const std::filesystem::path& base_dir);

// Throws CliError(kInvalid) with the library message for unphysical parameters.
SheetConfig build_sheet(const SheetParams& p);

// Numbers with 17 significant digits, keys in insertion order.
void write_json(std::ostream& os, const ojson& j);

int cmd_classify(const RunConfig& rc, std::ostream& out);
int cmd_sweep(const RunConfig& rc, std::ostream& out);
int cmd_scan_delta(const RunConfig& rc, std::ostream& out);
int cmd_frozen(const RunConfig& rc, std::ostream& out);
int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream& err);

ojson classify_json(const SheetConfig& cfg);

// Full command path shared by the executable and the tests: loads, runs, maps errors to exit codes.
int run_command(const std::string& command, const std::filesystem::path& config,
                const std::optional<std::string>& out_path, const std::optional<std::uint64_t>& seed,
                std::ostream& out, std::ostream& err);

}  // namespace rvs::cli
