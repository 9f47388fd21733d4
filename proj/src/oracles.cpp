#include "gammarobust/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gammarobust::oracles {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols,
                       std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0)
    throw DomainError("cost matrix must be nonempty");
  if (entries_.size() != rows_ * cols_)
    throw DomainError("cost matrix entry count mismatch");
  for (double e : entries_)
    if (!std::isfinite(e))
      throw DomainError("cost matrix entries must be finite");
}

CostMatrix::CostMatrix(const Matrix& m) : CostMatrix(m.rows(), m.cols(), m.data()) {}

Permutation::Permutation(std::vector<int> mapping_in)
    : mapping(std::move(mapping_in)) {
  std::vector<char> seen(mapping.size(), 0);
  for (int v : mapping) {
    if (v < 0 || static_cast<std::size_t>(v) >= mapping.size() || seen[v])
      throw DomainError("permutation mapping is not a bijection");
    seen[v] = 1;
  }
}

AssignmentSolution hungarian_solve(const CostMatrix& costs) {
  // Shortest augmenting path with dual potentials. Rows are padded with
  // zero-cost dummies when rows < cols so the working matrix is square in
  // the column dimension; dummy rows never affect the reported value.
  const std::size_t real_rows = costs.rows();
  const std::size_t n = std::max(costs.rows(), costs.cols());
  if (costs.rows() > costs.cols())
    throw DomainError("hungarian_solve requires rows <= cols");

  auto cost_at = [&](std::size_t i, std::size_t j) -> double {
    return i < real_rows ? costs.at(i, j) : 0.0;
  };

  const std::size_t rows = n, cols = costs.cols();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);

  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, kInf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost_at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentSolution sol;
  sol.assignment.assign(real_rows, -1);
  for (std::size_t j = 1; j <= cols; ++j) {
    const std::size_t i = match[j];
    if (i >= 1 && i <= real_rows) sol.assignment[i - 1] = static_cast<int>(j - 1);
  }
  for (std::size_t i = 0; i < real_rows; ++i)
    sol.value += costs.at(i, sol.assignment[i]);
  return sol;
}

QapCostTensor qap_product_tensor(const Matrix& flow, const Matrix& dist) {
  const std::size_t n = flow.rows();
  QapCostTensor t(n * n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          t[((i * n + j) * n + r) * n + s] = flow.at(i, j) * dist.at(r, s);
  return t;
}

namespace {

class QapSearch {
 public:
  QapSearch(std::size_t n, const QapCostTensor& cost) : n_(n), cost_(cost) {}

  QapSolveResult run() {
    assign_.assign(n_, -1);
    loc_used_.assign(n_, 0);
    best_value_ = kInf;
    nodes_ = 0;
    dfs(0, 0.0);
    return {Permutation(best_), best_value_, nodes_};
  }

 private:
  double c(std::size_t i, std::size_t j, std::size_t r, std::size_t s) const {
    return cost_[((i * n_ + j) * n_ + r) * n_ + s];
  }

  // Cost added when facility f is placed at location r on top of the
  // facilities 0..f-1 already placed.
  double placement_cost(std::size_t f, std::size_t r) const {
    double inc = c(f, f, r, r);
    for (std::size_t a = 0; a < f; ++a) {
      const std::size_t ra = static_cast<std::size_t>(assign_[a]);
      inc += c(f, a, r, ra) + c(a, f, ra, r);
    }
    return inc;
  }

  // Lower bound on the cost of completing the partial assignment of
  // facilities 0..f-1: Hungarian over remaining facilities x free locations
  // with exact interaction against the assigned part and half of a min-based
  // bound on interactions among the open facilities.
  double completion_bound(std::size_t f) const {
    const std::size_t rem = n_ - f;
    std::vector<std::size_t> free_locs;
    free_locs.reserve(rem);
    for (std::size_t r = 0; r < n_; ++r)
      if (!loc_used_[r]) free_locs.push_back(r);

    std::vector<double> m(rem * rem, 0.0);
    for (std::size_t gi = 0; gi < rem; ++gi) {
      const std::size_t g = f + gi;
      for (std::size_t si = 0; si < rem; ++si) {
        const std::size_t s = free_locs[si];
        double e = c(g, g, s, s);
        for (std::size_t a = 0; a < f; ++a) {
          const std::size_t ra = static_cast<std::size_t>(assign_[a]);
          e += c(g, a, s, ra) + c(a, g, ra, s);
        }
        double open = 0.0;
        for (std::size_t hi = 0; hi < rem; ++hi) {
          if (hi == gi) continue;
          const std::size_t h = f + hi;
          double lo = kInf;
          for (std::size_t ti = 0; ti < rem; ++ti) {
            if (ti == si) continue;
            const std::size_t t = free_locs[ti];
            lo = std::min(lo, c(g, h, s, t) + c(h, g, t, s));
          }
          open += (rem > 1) ? lo : 0.0;
        }
        m[gi * rem + si] = e + 0.5 * open;
      }
    }
    return hungarian_solve(CostMatrix(rem, rem, std::move(m))).value;
  }

  void dfs(std::size_t f, double partial) {
    if (f == n_) {
      if (partial < best_value_) {
        best_value_ = partial;
        best_.assign(assign_.begin(), assign_.end());
      }
      return;
    }
    for (std::size_t r = 0; r < n_; ++r) {
      if (loc_used_[r]) continue;
      ++nodes_;  // one node per attempted placement, pruned or not
      const double next = partial + placement_cost(f, r);
      assign_[f] = static_cast<int>(r);
      loc_used_[r] = 1;
      bool expand = next < best_value_;
      if (expand && f + 2 < n_)
        expand = next + completion_bound(f + 1) < best_value_;
      if (expand) dfs(f + 1, next);
      loc_used_[r] = 0;
      assign_[f] = -1;
    }
  }

  std::size_t n_;
  const QapCostTensor& cost_;
  std::vector<int> assign_;
  std::vector<int> best_;
  std::vector<char> loc_used_;
  double best_value_ = kInf;
  std::size_t nodes_ = 0;
};

}  // namespace

QapSolveResult qap_branch_and_bound(const Matrix& flow, const Matrix& dist,
                                    const QapCostTensor* cost_override,
                                    int size_cap) {
  if (!flow.is_square() || !dist.is_square() || flow.rows() != dist.rows())
    throw DomainError("flow and distance matrices must be square and equal-sized");
  const std::size_t n = flow.rows();
  if (n == 0) throw DomainError("empty QAP instance");
  if (static_cast<int>(n) > size_cap)
    throw ResourceError("QAP size " + std::to_string(n) + " exceeds cap " +
                        std::to_string(size_cap));
  QapCostTensor products;
  const QapCostTensor* cost = cost_override;
  if (cost == nullptr) {
    products = qap_product_tensor(flow, dist);
    cost = &products;
  }
  if (cost->size() != n * n * n * n)
    throw DomainError("cost tensor size mismatch");
  for (double v : *cost)
    if (!std::isfinite(v) || v < 0.0)
      throw DomainError("cost tensor entries must be finite and nonnegative");
  return QapSearch(n, *cost).run();
}

void enumerate_assignments(std::size_t m, std::size_t n, bool one_per_column,
                           const std::function<void(const std::vector<int>&)>& visit,
                           std::size_t cap) {
  if (m == 0 || n == 0) throw DomainError("empty assignment shape");
  if (one_per_column && m > n)
    throw DomainError("one-per-column enumeration needs m <= n");

  double count = 1.0;
  for (std::size_t i = 0; i < m; ++i)
    count *= one_per_column ? static_cast<double>(n - i) : static_cast<double>(n);
  if (count > static_cast<double>(cap))
    throw ResourceError("assignment enumeration would exceed cap of " +
                        std::to_string(cap));

  std::vector<int> pick(m, -1);
  std::vector<char> col_used(n, 0);
  auto rec = [&](auto&& self, std::size_t row) -> void {
    if (row == m) {
      visit(pick);
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (one_per_column && col_used[j]) continue;
      pick[row] = static_cast<int>(j);
      col_used[j] = 1;
      self(self, row + 1);
      col_used[j] = 0;
    }
  };
  rec(rec, 0);
}

std::uint64_t route_plan_count(int n_customers, int vehicles) {
  if (n_customers < 0 || vehicles < 0) throw DomainError("negative route shape");
  if (n_customers == 0) return 1;
  if (vehicles == 0) return 0;
  const int n = n_customers;
  std::uint64_t total = 0;
  for (int r = 1; r <= std::min(vehicles, n); ++r) {
    // (n!/r!) * C(n-1, r-1) plans with exactly r nonempty routes
    std::uint64_t plans = 1;
    for (int v = r + 1; v <= n; ++v) plans *= static_cast<std::uint64_t>(v);
    std::uint64_t choose = 1;
    for (int v = 1; v <= r - 1; ++v)
      choose = choose * static_cast<std::uint64_t>(n - v) / v;
    total += plans * choose;
  }
  return total;
}

void enumerate_routes(int n_customers, int vehicles,
                      const std::function<void(const RoutePlan&)>& visit,
                      std::size_t cap) {
  if (n_customers < 0 || vehicles < 0) throw DomainError("negative route shape");
  if (n_customers > 20)
    throw ResourceError("route enumeration limited to 20 customers");
  const std::uint64_t count = route_plan_count(n_customers, vehicles);
  if (count > cap)
    throw ResourceError("route enumeration would yield " + std::to_string(count) +
                        " plans, cap is " + std::to_string(cap));
  if (n_customers == 0) {
    visit(RoutePlan{});
    return;
  }
  if (vehicles == 0) return;

  RoutePlan plan;
  std::vector<char> used(static_cast<std::size_t>(n_customers) + 1, 0);
  int remaining = n_customers;

  // Routes are emitted with strictly increasing first customers, which is
  // exactly one arrangement per unordered set of routes.
  auto start_route = [&](auto&& self, int min_first) -> void {
    if (remaining == 0) {
      visit(plan);
      return;
    }
    if (static_cast<int>(plan.size()) == vehicles) return;

    auto extend = [&](auto&& ext) -> void {
      self(self, plan.back().front());  // close the current route
      for (int c = 1; c <= n_customers; ++c) {
        if (used[c]) continue;
        used[c] = 1;
        --remaining;
        plan.back().push_back(c);
        ext(ext);
        plan.back().pop_back();
        ++remaining;
        used[c] = 0;
      }
    };

    for (int first = min_first + 1; first <= n_customers; ++first) {
      if (used[first]) continue;
      used[first] = 1;
      --remaining;
      plan.push_back({first});
      extend(extend);
      plan.pop_back();
      ++remaining;
      used[first] = 0;
    }
  };
  start_route(start_route, 0);
}

}  // namespace gammarobust::oracles
