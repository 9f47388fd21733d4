#pragma once

#include <any>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gammarobust {

/// Tolerance used when comparing objective values across solution routes.
inline constexpr double kValueTolerance = 1e-9;

/// Hard ceiling on the number of feasible points an enumeration-based
/// optimizer is allowed to visit before giving up with a ResourceError.
inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data or a precondition violation (bad budget, negative
/// deviation, malformed plan, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured cap (enumeration size, oracle problem size) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An oracle call failed or returned data violating its contract. Carries
/// the candidate that was being solved.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// Malformed instance file. line/column are 1-based token positions.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  std::size_t line = 0;
  std::size_t column = 0;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Protection budget: at most gamma uncertain terms deviate simultaneously.
struct Gamma {
  int value = 0;
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric(double tol = 0.0) const;
  bool has_zero_diagonal(double tol = 0.0) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Paired nominal/deviation vectors describing per-term interval
/// uncertainty [nominal_i, nominal_i + deviation_i] over m terms.
class IntervalUncertainty {
 public:
  IntervalUncertainty(std::vector<double> nominal, std::vector<double> deviation);

  std::size_t size() const { return nominal_.size(); }
  const std::vector<double>& nominal() const { return nominal_; }
  const std::vector<double>& deviation() const { return deviation_; }

 private:
  std::vector<double> nominal_;
  std::vector<double> deviation_;
};

/// Per-term evaluation of a fixed feasible point: the nominal value of each
/// uncertain term and how much the term can rise when its coefficient moves
/// to the adversarial end of its interval.
struct TermEvaluation {
  std::vector<double> nominal_values;
  std::vector<double> deviations;

  std::size_t size() const { return nominal_values.size(); }
};

/// Identifier of a subproblem candidate. Candidates are plain indices
/// k in [m]_0 for the linear sweeps, (k,l) pairs for assignment-structured
/// sweeps and 4-tuples for the quadratic assignment sweep. rank 0 is the
/// zero candidate (threshold 0, printed as "0").
struct CandidateId {
  std::array<int, 4> v{0, 0, 0, 0};
  std::uint8_t rank = 0;

  static CandidateId zero() { return {}; }
  static CandidateId single(int k) { return {{k, 0, 0, 0}, 1}; }
  static CandidateId pair(int k, int l) { return {{k, l, 0, 0}, 2}; }
  static CandidateId quad(int a, int b, int c, int d) { return {{a, b, c, d}, 4}; }

  bool is_zero() const { return rank == 0; }
  std::string str() const;

  friend bool operator==(const CandidateId&, const CandidateId&) = default;
};

enum class SolveStatus : std::uint8_t {
  kSolved,   // subproblem solved by an oracle call
  kReused,   // identical subproblem detected, cached value reused
  kPruned,   // dropped by early pruning, no value available
};

/// One audit row per subproblem candidate considered by a sweep.
struct SubproblemRecord {
  CandidateId candidate;
  double constant = 0.0;  // candidate constant (e.g. Gamma * threshold)
  double value = 0.0;     // subproblem optimum
  SolveStatus status = SolveStatus::kSolved;

  double total() const { return constant + value; }
};

/// Result of a robust solve: optimal value, an opaque problem-specific
/// optimal point, the winning candidate and the per-subproblem audit log.
/// Ties are broken by the earliest candidate in iteration order.
struct RobustSolution {
  double value = 0.0;
  std::any point;
  CandidateId winning;
  std::vector<SubproblemRecord> log;
  std::size_t points_considered = 0;  // enumeration-based routes only
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& key, double fallback = 0.0) const;
};

/// A nominal problem with finitely many feasible points. for_each must call
/// the visitor once per point, in a fixed deterministic order, with the
/// point handle and its term evaluation.
struct EnumerableProblem {
  std::size_t term_count = 0;
  std::function<void(
      const std::function<void(const std::any&, const TermEvaluation&)>&)>
      for_each;
};

/// Worst-case objective of one evaluated point under budget gamma: the
/// nominal sum plus the gamma largest nonnegative deviations. Deviating
/// fewer than gamma terms is allowed, so negative deviations never
/// contribute. Accepts gamma in [0, m]; 0 means nominal, m full deviation.
double worst_case_value(const TermEvaluation& eval, Gamma gamma);

/// Ground-truth robust optimizer: enumerates every feasible point and
/// minimizes worst_case_value. Throws ResourceError once more than `cap`
/// points have been visited.
RobustSolution brute_force_robust_optimum(const EnumerableProblem& problem,
                                          Gamma gamma,
                                          std::size_t cap = kDefaultEnumerationCap);

/// Candidate-sweep robust optimizer built from the epigraph decomposition:
/// min over k in [m]_0 and feasible x of
///   gamma * theta_k(x) + sum_i [nominal_i(x) + max(0, theta_i(x) - theta_k(x))]
/// with theta_i(x) the clamped per-term deviation and theta_0 = 0. Must
/// agree with brute_force_robust_optimum on every enumerable instance.
RobustSolution generic_nofenchel_optimum(const EnumerableProblem& problem,
                                         Gamma gamma,
                                         std::size_t cap = kDefaultEnumerationCap);

}  // namespace gammarobust
