#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gammarobust/io.hpp"

namespace gammarobust::cli {

enum class ProblemKind { kQap, kScheduling, kVrp, kQuadBin };

enum class ReduceMode { kNone, kSymmetry, kRedNumber, kAll };

// Process exit codes; CLI11 usage errors keep their own code 1.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitDomainError = 3;
inline constexpr int kExitResourceError = 4;
inline constexpr int kExitVerifyMismatch = 5;

struct RunConfig {
  ProblemKind problem = ProblemKind::kQap;
  /// Path to an instance file, or one of the built-in ids
  /// builtin:qap3, builtin:qap4, builtin:sched5, builtin:quadbin4, builtin:vrp5.
  std::string instance;
  int take_first = 5;  // Solomon truncation
  bool swap_matrices = false;  // QAPLIB files with distance matrix first
  io::UncertaintySpec uncertainty = io::UncertaintySpec::proportional(0.1);
  std::vector<int> gammas;
  std::vector<int> vehicles = {1};
  ReduceMode reduce = ReduceMode::kAll;
  bool vrp_top_gamma = false;  // use the direct top-gamma method instead of 2m+1
  bool verify = false;
  std::string csv_path = "sweep.csv";
  std::string svg_path;
  int jobs = 1;
  bool timing = true;
};

/// Parses "A..B" or a comma-separated list into a budget list.
std::vector<int> parse_gamma_list(const std::string& text);

/// Runs the sweep described by config: solves every (gamma, configuration)
/// point, optionally cross-checks against brute-force enumeration, writes the
/// CSV (and SVG when requested) and prints a summary table. Returns one of
/// the exit codes above.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gammarobust::cli
