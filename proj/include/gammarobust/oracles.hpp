#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gammarobust/core.hpp"

namespace gammarobust::oracles {

/// Rectangular cost matrix, rows <= cols after zero-padding. Entries must be
/// finite.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  explicit CostMatrix(const Matrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Bijection of [n]. mapping[i] is the image of i (0-based).
struct Permutation {
  std::vector<int> mapping;

  explicit Permutation(std::vector<int> mapping);
  std::size_t size() const { return mapping.size(); }
};

struct AssignmentSolution {
  std::vector<int> assignment;  // row -> column
  double value = 0.0;
};

/// Minimum-cost assignment of every row to a distinct column (shortest
/// augmenting path with potentials, O(rows^2 * cols)).
AssignmentSolution hungarian_solve(const CostMatrix& costs);

/// Interaction cost tensor for the assignment sweep: entry (i,j,r,s) is the
/// cost contributed when facility i sits at location r and facility j at s.
/// Stored flat with index ((i*n + j)*n + r)*n + s.
using QapCostTensor = std::vector<double>;

QapCostTensor qap_product_tensor(const Matrix& flow, const Matrix& dist);

struct QapSolveResult {
  Permutation assignment;
  double value = 0.0;
  std::size_t nodes = 0;
};

inline constexpr int kDefaultQapSizeCap = 12;

/// Exact QAP minimum over all permutations via depth-first branch and bound.
/// The bound at each node is the fixed partial cost plus a Hungarian
/// relaxation over the remaining facility/location pairs whose entries keep
/// assigned interactions exact and lower-bound the open pairwise terms.
/// When cost_override is given it replaces the flow*dist products.
/// Returns the lexicographically smallest optimal permutation.
QapSolveResult qap_branch_and_bound(const Matrix& flow, const Matrix& dist,
                                    const QapCostTensor* cost_override = nullptr,
                                    int size_cap = kDefaultQapSizeCap);

/// Streams every 0/1 row-selection matrix with exactly one active column per
/// row, encoded as row -> column. With one_per_column the columns must be
/// distinct as well (requires m <= n). Throws ResourceError if the count
/// exceeds cap before yielding anything.
void enumerate_assignments(std::size_t m, std::size_t n, bool one_per_column,
                           const std::function<void(const std::vector<int>&)>& visit,
                           std::size_t cap = kDefaultEnumerationCap);

/// An ordered route per vehicle; customers are 1-based, depot implicit.
using RoutePlan = std::vector<std::vector<int>>;

/// Number of canonical route plans: partitions of [n] into at most K
/// nonempty ordered sequences, vehicles unlabeled. Fixing the vehicle
/// relabeling symmetry by sorting routes by first-visited customer gives
///   sum over r in [min(K,n)] of (n!/r!) * C(n-1, r-1)
/// plans, and exactly 1 empty plan for n = 0. In particular n=2, K=2 yields
/// 3 plans: [(1,2)], [(2,1)] and {[1],[2]}.
std::uint64_t route_plan_count(int n_customers, int vehicles);

/// Streams every canonical route plan (routes sorted by first customer,
/// empty routes dropped, idle vehicles implicit).
void enumerate_routes(int n_customers, int vehicles,
                      const std::function<void(const RoutePlan&)>& visit,
                      std::size_t cap = kDefaultEnumerationCap);

}  // namespace gammarobust::oracles
