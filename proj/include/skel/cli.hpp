#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skel/kernels.hpp"

namespace skel::cli {

enum ExitCode : int { kSuccess = 0, kVerifyFailed = 1, kUsage = 2, kNumerical = 3 };

struct RunConfig {
  int n_nodes = 400;
  double map_scale = 1.0;
  double margin = 1e-6;
  double theta_min = 0.5 * std::numbers::pi;
  double theta_max = 0.97 * std::numbers::pi;
  int theta_steps = 64;
  std::vector<SectorLabel> sectors;  ///< empty = all four
  double lambda = 0.0;
  double theta23 = 2.0 * std::numbers::pi / 3.0;
  double theta13 = 2.0 * std::numbers::pi / 3.0;
  double k_min = 0.75;
  double k_max = 1.5;
  int k_steps = 30;
  int state_index = 0;
  double extent = 4.0;
  int points = 41;
  std::string format = "csv";
  std::string out;  ///< empty = standard output

  /// Throws ContractError on out-of-range fields.
  void validate() const;
};

/// One row of the verification table.
struct Check {
  std::string name;
  double expected = 0.0;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Radians from "1.23", "pi", "2pi/3", "0.7pi", "3*pi/4". Throws ContractError.
double parse_angle(std::string_view text);

/// "+,-", "+1,-1", "1,-1". Throws ContractError.
SectorLabel parse_sector(std::string_view text);

/// The oracle suite behind the verify subcommand.
std::vector<Check> verify_checks(const RunConfig& cfg);

/// Entry point: parses argv, runs one subcommand, returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skel::cli
