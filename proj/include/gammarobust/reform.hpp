#pragma once

#include <any>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gammarobust/core.hpp"

namespace gammarobust::reform {

/// Nominal oracle answer: the chosen point, its objective value under the
/// queried costs and the 0/1 activity vector of the uncertain terms.
struct LinearOracleResult {
  std::any point;
  double value = 0.0;
  std::vector<double> active;
};

using LinearOracle =
    std::function<LinearOracleResult(const std::vector<double>& costs)>;

/// A nominal problem whose m uncertain coefficients each multiply a 0/1-valued
/// term. The feasible set lives behind the oracle: given nonnegative costs c
/// it returns a minimizer together with its activity vector l(x), and its
/// value must equal c . l(x).
struct ZeroOneLinearProblem {
  IntervalUncertainty uncertainty;
  LinearOracle oracle;
  std::string description;
};

enum class PlanReduction { kFull, kRedNumber };

/// Ordered list of subproblem candidates for the threshold sweep. Candidate 0
/// is the zero-threshold candidate; candidate k >= 1 uses the k-th term's
/// deviation as threshold. sort_permutation maps descending-deviation
/// positions back to original 0-based term indices (stable on ties).
struct CandidatePlan {
  std::vector<int> candidates;
  PlanReduction reduction = PlanReduction::kFull;
  std::vector<int> sort_permutation;
};

/// Builds the candidate plan. Full keeps all m+1 candidates [0..m]. The
/// reduced plan sorts deviations descending and keeps the sorted positions
/// {gamma+1, gamma+3, ..., gamma+g} plus the zero candidate, where g is the
/// largest odd integer below (m+1) - gamma; that is ceil((m-gamma)/2) + 1
/// candidates in total.
CandidatePlan make_candidate_plan(const std::vector<double>& deviation,
                                  Gamma gamma, PlanReduction reduction);

/// Drops every unsolved candidate whose constant gamma * deviation already
/// exceeds the total of some solved subproblem; such a candidate cannot win
/// because its total is at least its constant. The zero candidate is never
/// dropped.
CandidatePlan early_prune(const CandidatePlan& plan,
                          const std::vector<SubproblemRecord>& solved,
                          Gamma gamma, const std::vector<double>& deviation);

struct PseudoLinOptions {
  /// Solve candidates from smallest threshold upward and drop dominated ones
  /// after every subproblem.
  bool early_prune = false;
};

/// Threshold sweep for 0/1-term problems: min over plan candidates k of
///   gamma * dev_k + oracle value at costs nominal_j + max(0, dev_j - dev_k).
/// One oracle call per surviving candidate; the reduced plan must return the
/// full plan's value.
RobustSolution solve_pseudolin(const ZeroOneLinearProblem& problem, Gamma gamma,
                               const CandidatePlan& plan,
                               const PseudoLinOptions& options = {});

/// Baseline sweep for problems whose feasible set is a subset of {0,1}^m and
/// whose activity vector is the point itself. Exactly m+1 oracle calls.
RobustSolution solve_bertsimas_sim(const ZeroOneLinearProblem& problem,
                                   Gamma gamma);

struct AssignmentOracleResult {
  std::any point;
  double value = 0.0;
};

/// Each of the m uncertain row multipliers u_i scales one block row of
/// nonnegative entries B_i over n columns, and feasible points activate
/// exactly one column per block. The oracle minimizes a modified m x n cost
/// matrix over the feasible set.
struct AssignmentStructured {
  AssignmentStructured(std::vector<std::vector<double>> block_rows,
                       IntervalUncertainty uncertainty,
                       std::function<AssignmentOracleResult(const Matrix&)> oracle);

  std::vector<std::vector<double>> block_rows;  // m blocks x n columns
  IntervalUncertainty uncertainty;
  std::function<AssignmentOracleResult(const Matrix&)> oracle;

  std::size_t block_count() const { return block_rows.size(); }
  std::size_t column_count() const { return block_rows.front().size(); }
};

/// Uncertainty-transfer sweep: min over candidates (k,l) in [m] x [n] plus
/// (0,0) of gamma * dev_k * B[k][l] + oracle value at modified costs
/// c[i][j] = nom_i * B[i][j] + max(0, dev_i * B[i][j] - dev_k * B[k][l]).
/// Exactly m*n + 1 oracle calls without reduction; with use_red_number the
/// flattened products go through make_candidate_plan first and only the
/// surviving (k,l) pairs are solved.
RobustSolution solve_assignment_structured(const AssignmentStructured& problem,
                                           Gamma gamma, bool use_red_number);

/// Runs the full threshold sweep with an alpha-approximate oracle
/// (value <= alpha * subproblem optimum on every query). The returned value
/// is then within alpha of the exact robust optimum.
RobustSolution solve_with_approx_oracle(const ZeroOneLinearProblem& problem,
                                        Gamma gamma, double alpha);

}  // namespace gammarobust::reform
