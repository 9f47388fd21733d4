#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gammarobust/core.hpp"
#include "gammarobust/oracles.hpp"
#include "gammarobust/reform.hpp"

namespace gammarobust::problems {

/// Quadratic assignment data: nominal flows, flow deviations and distances.
/// symmetric is set when all three matrices are symmetric with zero
/// diagonal, which is what the symmetry reduction requires.
struct QapInstance {
  QapInstance(Matrix flow_nominal, Matrix flow_deviation, Matrix dist);

  std::size_t n = 0;
  Matrix flow_nominal;
  Matrix flow_deviation;
  Matrix dist;
  bool symmetric = false;
};

struct QapReductions {
  bool symmetry = false;    // restrict flow candidates to k1 < k2
  bool red_number = false;  // candidate-plan reduction on the flattened products
  bool dedup = false;       // solve identical modified-cost subproblems once
};

/// Threshold sweep over flow/distance product candidates (k1,k2,k3,k4) with
/// a branch-and-bound QAP oracle per subproblem. gamma counts deviating flow
/// entries, so gamma in [1, n^2]. The symmetric candidate family
/// {k1 < k2} x [n]^2 plus the zero candidate has (n^4 - n^3)/2 + 1 members.
RobustSolution qap_robust_solve(const QapInstance& inst, Gamma gamma,
                                const QapReductions& reductions = {},
                                int oracle_size_cap = oracles::kDefaultQapSizeCap);

/// Single-machine scheduling: m jobs with uncertain processing times and
/// positional weights (default m+1-i for position i), minimizing the total
/// completion time sum_j p_j * q_{pos(j)}.
struct SchedulingInstance {
  SchedulingInstance(std::vector<double> proc_nominal,
                     std::vector<double> proc_deviation,
                     std::vector<double> positional_weights = {});

  std::size_t job_count() const { return proc_nominal.size(); }

  std::vector<double> proc_nominal;
  std::vector<double> proc_deviation;
  std::vector<double> positional_weights;
};

/// Solves the scheduling counterpart through the assignment-structured sweep
/// with block rows B[j][i] = q_i and a Hungarian oracle. The optimal point is
/// the job -> position assignment.
RobustSolution scheduling_robust_solve(const SchedulingInstance& inst, Gamma gamma,
                                       bool use_red_number = false);

/// Binary quadratic objective sum over pairs (k,l), l <= k, of p_{k,l} x_k x_l
/// with uncertain pair coefficients; diagonal pairs (k,k) contribute the
/// linear terms. include_diagonal=false switches to the strictly lower
/// triangular pair set.
struct QuadraticBinaryInstance {
  QuadraticBinaryInstance(std::size_t n, const Matrix& pair_nominal,
                          const Matrix& pair_deviation,
                          std::function<bool(const std::vector<int>&)> feasible,
                          bool include_diagonal = true);

  std::size_t n = 0;
  bool include_diagonal = true;
  std::vector<std::pair<int, int>> pairs;  // 1-based, ordered k asc then l asc
  std::vector<double> pair_nominal;
  std::vector<double> pair_deviation;
  std::function<bool(const std::vector<int>&)> feasible;

  std::size_t term_count() const { return pairs.size(); }
};

struct QuadraticBinaryOptions {
  reform::PlanReduction reduction = reform::PlanReduction::kFull;
  bool early_prune = false;
};

/// Threshold sweep with an exhaustive-enumeration oracle over the feasible
/// subset of {0,1}^n; |pairs| + 1 subproblems on the full plan.
RobustSolution quadratic_binary_robust_solve(
    const QuadraticBinaryInstance& inst, Gamma gamma,
    const QuadraticBinaryOptions& options = {},
    std::size_t cap = kDefaultEnumerationCap);

/// Soft-due-time routing data. travel is (n+2)x(n+2) with node 0 the depot
/// and node n+1 its copy; service and due vectors hold customers 1..n at
/// index i-1. Due times are uncertain downward: b_i in [nominal - deviation,
/// nominal].
struct VrpInstance {
  VrpInstance(int n, int vehicles, Matrix travel, std::vector<double> service,
              std::vector<double> due_nominal, std::vector<double> due_deviation);

  int n = 0;
  int vehicles = 1;
  Matrix travel;
  std::vector<double> service;
  std::vector<double> due_nominal;
  std::vector<double> due_deviation;
};

/// Earliest feasible arrival times for a plan covering every customer exactly
/// once: the time-propagation constraint taken with equality along each route.
std::vector<double> vrp_earliest_arrivals(const VrpInstance& inst,
                                          const oracles::RoutePlan& plan);

enum class VrpMethod {
  kNoFenchel2m1,    // 2m+1 candidate expressions from the dual case split
  kDirectTopGamma,  // worst_case_value on the per-customer tardiness shifts
};

/// Robust total tardiness of a fixed arrival vector under budget gamma.
/// Both methods agree; the candidate method requires gamma in [1, m].
double robust_tardiness_for_arrivals(const std::vector<double>& arrivals,
                                     const std::vector<double>& due_nominal,
                                     const std::vector<double>& due_deviation,
                                     Gamma gamma, VrpMethod method);

/// Minimizes robust tardiness over every canonical route plan, scoring each
/// plan at its earliest arrivals (all objective terms are nondecreasing in
/// the arrival times, so later arrivals never help a fixed plan).
RobustSolution vrp_robust_solve(const VrpInstance& inst, Gamma gamma,
                                VrpMethod method,
                                std::size_t cap = kDefaultEnumerationCap);

// Brute-force adapters: each exposes the finite feasible set and per-point
// term evaluations of one problem stack for the core verifier.

EnumerableProblem enumerable_qap(const QapInstance& inst,
                                 std::size_t cap = kDefaultEnumerationCap);
EnumerableProblem enumerable_scheduling(const SchedulingInstance& inst,
                                        std::size_t cap = kDefaultEnumerationCap);
EnumerableProblem enumerable_quadratic_binary(const QuadraticBinaryInstance& inst,
                                              std::size_t cap = kDefaultEnumerationCap);
EnumerableProblem enumerable_vrp(const VrpInstance& inst,
                                 std::size_t cap = kDefaultEnumerationCap);

}  // namespace gammarobust::problems
