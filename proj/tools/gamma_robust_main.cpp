#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "gammarobust/cli.hpp"

int main(int argc, char** argv) {
  using gammarobust::cli::ProblemKind;
  using gammarobust::cli::ReduceMode;
  using gammarobust::cli::RunConfig;

  CLI::App app{
      "Budget-uncertain discrete optimization: oracle-based reformulations "
      "with brute-force verification and gamma sweeps"};

  RunConfig config;
  std::string problem = "qap";
  std::string uncertainty = "prop:0.1";
  std::string gamma_text = "1..3";
  std::string reduce = "all";
  bool no_timing = false;

  app.add_option("--problem", problem, "Problem stack")
      ->check(CLI::IsMember({"qap", "scheduling", "vrp", "quadbin"}))
      ->capture_default_str();
  app.add_option("--instance", config.instance,
                 "Instance file or built-in id (builtin:qap3, builtin:qap4, "
                 "builtin:sched5, builtin:quadbin4, builtin:vrp5)");
  app.add_option("--take-first", config.take_first,
                 "Keep the first N customers of a Solomon file")
      ->capture_default_str();
  app.add_flag("--swap-matrices", config.swap_matrices,
               "Treat the first QAPLIB matrix as distances");
  app.add_option("--uncertainty", uncertainty,
                 "Deviation generator: prop:FACTOR, uniform:SEED or file:PATH")
      ->capture_default_str();
  app.add_option("--gamma", gamma_text, "Budgets, e.g. 1..5 or 1,3,5")
      ->capture_default_str();
  app.add_option("--vehicles", config.vehicles, "Vehicle counts (vrp only)")
      ->capture_default_str();
  app.add_option("--reduce", reduce, "Subproblem reductions")
      ->check(CLI::IsMember({"none", "symmetry", "rednumber", "all"}))
      ->capture_default_str();
  app.add_flag("--vrp-top-gamma", config.vrp_top_gamma,
               "Score VRP plans with the direct top-gamma evaluator");
  app.add_flag("--verify", config.verify,
               "Cross-check every value against brute-force enumeration");
  app.add_option("--csv", config.csv_path, "CSV output path")
      ->capture_default_str();
  app.add_option("--svg", config.svg_path, "SVG plot output path");
  app.add_option("--jobs", config.jobs, "Concurrent sweep points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--no-timing", no_timing, "Drop the millis column from the CSV");

  CLI11_PARSE(app, argc, argv);

  static const std::map<std::string, ProblemKind> kinds = {
      {"qap", ProblemKind::kQap},
      {"scheduling", ProblemKind::kScheduling},
      {"vrp", ProblemKind::kVrp},
      {"quadbin", ProblemKind::kQuadBin}};
  static const std::map<std::string, ReduceMode> reductions = {
      {"none", ReduceMode::kNone},
      {"symmetry", ReduceMode::kSymmetry},
      {"rednumber", ReduceMode::kRedNumber},
      {"all", ReduceMode::kAll}};

  config.problem = kinds.at(problem);
  config.reduce = reductions.at(reduce);
  config.timing = !no_timing;
  try {
    config.uncertainty = gammarobust::io::UncertaintySpec::parse(uncertainty);
    config.gammas = gammarobust::cli::parse_gamma_list(gamma_text);
  } catch (const std::exception& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return gammarobust::cli::kExitDomainError;
  }

  return gammarobust::cli::run(config, std::cout, std::cerr);
}
