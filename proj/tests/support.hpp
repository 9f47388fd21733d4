#pragma once

// Shared test helpers: independent reference computations (honest subset
// enumeration, never the top-gamma shortcut) and seeded random instance
// generators. Everything here must stay independent of the library's
// solution paths it is used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "gammarobust/core.hpp"
#include "gammarobust/problems.hpp"
#include "gammarobust/reform.hpp"

namespace testsupport {

using gammarobust::EnumerableProblem;
using gammarobust::Gamma;
using gammarobust::IntervalUncertainty;
using gammarobust::Matrix;
using gammarobust::TermEvaluation;

// Worst case of one evaluated point by enumerating every subset S of terms
// with |S| <= gamma and taking the best adversarial pick.
inline double worst_case_by_subsets(const TermEvaluation& eval, int gamma) {
  const std::size_t m = eval.size();
  double nominal = 0.0;
  for (double v : eval.nominal_values) nominal += v;
  double best_extra = 0.0;
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::size_t from, double extra) -> void {
    best_extra = std::max(best_extra, extra);
    if (static_cast<int>(chosen.size()) == gamma) return;
    for (std::size_t i = from; i < m; ++i) {
      chosen.push_back(i);
      self(self, i + 1, extra + eval.deviations[i]);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0.0);
  return nominal + best_extra;
}

// Robust optimum of an explicit point list by subset enumeration per point.
inline double robust_optimum_by_subsets(const std::vector<TermEvaluation>& evals,
                                        int gamma) {
  double best = std::numeric_limits<double>::infinity();
  for (const TermEvaluation& e : evals)
    best = std::min(best, worst_case_by_subsets(e, gamma));
  return best;
}

// Enumerable problem over explicit 0/1 activity vectors with interval
// uncertainty: term i of point x contributes (nominal_i, deviation_i) when
// active.
inline EnumerableProblem selection_problem(IntervalUncertainty unc,
                                           std::vector<std::vector<int>> points) {
  EnumerableProblem p;
  p.term_count = unc.size();
  p.for_each = [unc = std::move(unc), points = std::move(points)](
                   const std::function<void(const std::any&,
                                            const TermEvaluation&)>& visit) {
    TermEvaluation eval;
    eval.nominal_values.resize(unc.size());
    eval.deviations.resize(unc.size());
    for (const std::vector<int>& x : points) {
      for (std::size_t i = 0; i < unc.size(); ++i) {
        eval.nominal_values[i] = unc.nominal()[i] * x[i];
        eval.deviations[i] = unc.deviation()[i] * x[i];
      }
      visit(x, eval);
    }
  };
  return p;
}

// Exact oracle over an explicit point list, for the reformulation engines.
inline gammarobust::reform::ZeroOneLinearProblem zero_one_problem(
    IntervalUncertainty unc, std::vector<std::vector<int>> points,
    std::string description = "test enumeration oracle") {
  gammarobust::reform::LinearOracle oracle =
      [points = std::move(points)](const std::vector<double>& costs) {
        gammarobust::reform::LinearOracleResult best;
        best.value = std::numeric_limits<double>::infinity();
        for (const std::vector<int>& x : points) {
          double value = 0.0;
          for (std::size_t i = 0; i < costs.size(); ++i) value += costs[i] * x[i];
          if (value < best.value) {
            best.value = value;
            best.point = x;
            best.active.assign(x.begin(), x.end());
          }
        }
        return best;
      };
  return {std::move(unc), std::move(oracle), std::move(description)};
}

inline std::vector<std::vector<int>> unit_points(std::size_t m) {
  std::vector<std::vector<int>> pts(m, std::vector<int>(m, 0));
  for (std::size_t i = 0; i < m; ++i) pts[i][i] = 1;
  return pts;
}

// Every nonempty subset of {0,1}^m, or a random nonempty selection of them.
inline std::vector<std::vector<int>> random_point_set(std::mt19937_64& rng,
                                                      std::size_t m,
                                                      double keep_prob = 0.5) {
  std::vector<std::vector<int>> pts;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (coin(rng) > keep_prob) continue;
    std::vector<int> x(m);
    for (std::size_t b = 0; b < m; ++b) x[b] = (mask >> b) & 1 ? 1 : 0;
    pts.push_back(std::move(x));
  }
  if (pts.empty()) pts.push_back(std::vector<int>(m, 0));
  return pts;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t m,
                                         double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(m);
  for (double& x : v) x = dist(rng);
  return v;
}

inline Matrix random_symmetric_zero_diag(std::mt19937_64& rng, std::size_t n,
                                         double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::floor(dist(rng));
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                            std::size_t cols, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = std::floor(dist(rng));
  return m;
}

inline gammarobust::problems::VrpInstance random_vrp(std::mt19937_64& rng, int n,
                                                     int vehicles) {
  std::uniform_real_distribution<double> coord(0.0, 20.0);
  std::vector<double> xs(n + 1), ys(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = coord(rng);
    ys[i] = coord(rng);
  }
  Matrix travel(n + 2, n + 2);
  auto cx = [&](int a) { return a == n + 1 ? xs[0] : xs[a]; };
  auto cy = [&](int a) { return a == n + 1 ? ys[0] : ys[a]; };
  for (int a = 0; a <= n + 1; ++a)
    for (int b = 0; b <= n + 1; ++b)
      travel.at(a, b) = std::hypot(cx(a) - cx(b), cy(a) - cy(b));
  std::uniform_real_distribution<double> service(0.0, 3.0);
  std::uniform_real_distribution<double> due(2.0, 30.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::vector<double> s(n), b(n), db(n);
  for (int i = 0; i < n; ++i) {
    s[i] = service(rng);
    b[i] = due(rng);
    db[i] = frac(rng) * b[i];
  }
  return gammarobust::problems::VrpInstance(n, vehicles, travel, s, b, db);
}

}  // namespace testsupport
