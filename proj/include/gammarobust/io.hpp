#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gammarobust/core.hpp"
#include "gammarobust/problems.hpp"

namespace gammarobust::io {

/// Parsed QAPLIB-format instance: size token followed by two n x n matrices.
/// By convention the first matrix is the flow and the second the distance;
/// callers can swap for instances using the opposite convention.
struct QaplibInstance {
  std::size_t n = 0;
  Matrix first;   // flow by convention
  Matrix second;  // distance by convention
};

QaplibInstance parse_qaplib(std::string_view text);
std::string format_qaplib(const QaplibInstance& inst);

/// One raw customer-table line (customer 0 is the depot).
struct SolomonRow {
  int id = 0;
  double x = 0, y = 0, demand = 0, ready = 0, due = 0, service = 0;
};

/// Solomon-style instance truncated to the depot plus the first take_first
/// customers. Travel times are full-precision Euclidean distances between the
/// coordinates; the nominal due time of a customer is its READY TIME column.
/// Demands and the declared fleet are parsed but unused by the solvers.
struct VrpSkeleton {
  std::string name;
  int n = 0;
  Matrix travel;  // (n+2) x (n+2); node 0 = depot, node n+1 = depot copy
  std::vector<double> service;
  std::vector<double> due_nominal;
  std::vector<double> demand;
  double capacity = 0.0;
  int declared_vehicles = 0;
  std::vector<SolomonRow> table;  // retained rows: depot + kept customers
};

VrpSkeleton parse_solomon(std::string_view text, int take_first);
std::string format_solomon(const VrpSkeleton& skeleton);

problems::VrpInstance make_vrp_instance(const VrpSkeleton& skeleton, int vehicles,
                                        std::vector<double> due_deviation);

/// How deviations are produced from nominal data.
struct UncertaintySpec {
  enum class Kind { kProportional, kUniformRandom, kFromFile };
  Kind kind = Kind::kProportional;
  double factor = 0.0;
  std::uint64_t seed = 0;
  std::string path;

  static UncertaintySpec proportional(double factor);
  static UncertaintySpec uniform_random(std::uint64_t seed);
  static UncertaintySpec from_file(std::string path);
  /// Accepts "prop:FACTOR", "uniform:SEED" or "file:PATH".
  static UncertaintySpec parse(const std::string& text);
  std::string str() const;
};

/// Elementwise deviations from a base vector/matrix. proportional gives
/// factor * base; uniform_random draws each entry from U[0, base] using
/// mt19937_64 seeded with the spec seed and the mapping
/// (word >> 11) * 2^-53, so identical seeds give bit-identical output on
/// every platform.
std::vector<double> generate_uncertainty(const UncertaintySpec& spec,
                                         const std::vector<double>& base);
Matrix generate_uncertainty(const UncertaintySpec& spec, const Matrix& base);

/// One sweep observation: an instance/configuration pair at one budget.
struct SweepRow {
  std::string instance;
  int gamma = 0;
  std::string config;
  double value = 0.0;
  std::string winner;
  std::size_t subproblems = 0;
  std::size_t oracle_calls = 0;
  long long millis = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline constexpr const char* kSweepCsvHeader =
    "instance,gamma,config,value,winner,subproblems,oracle_calls,millis";

/// CSV with the fixed header above; include_timing=false drops the millis
/// column so repeated runs compare byte-identically. Rejects empty results
/// and series that are not nondecreasing in gamma within a configuration.
std::string sweep_csv_string(const SweepResult& result, bool include_timing = true);
void write_sweep_csv(const SweepResult& result, const std::string& path,
                     bool include_timing = true);
SweepResult parse_sweep_csv(std::string_view text);

/// Self-contained SVG scatter/line plot of value against gamma, one series
/// per configuration.
std::string sweep_svg_string(const SweepResult& result);
void write_sweep_svg(const SweepResult& result, const std::string& path);

}  // namespace gammarobust::io
