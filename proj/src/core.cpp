#include "gammarobust/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gammarobust {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw DomainError("ragged row in matrix literal");
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

bool Matrix::is_symmetric(double tol) const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
  return true;
}

bool Matrix::has_zero_diagonal(double tol) const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    if (std::abs(at(i, i)) > tol) return false;
  return true;
}

IntervalUncertainty::IntervalUncertainty(std::vector<double> nominal,
                                         std::vector<double> deviation)
    : nominal_(std::move(nominal)), deviation_(std::move(deviation)) {
  if (nominal_.empty())
    throw DomainError("uncertainty needs at least one term");
  if (nominal_.size() != deviation_.size())
    throw DomainError("nominal/deviation length mismatch: " +
                      std::to_string(nominal_.size()) + " vs " +
                      std::to_string(deviation_.size()));
  for (double d : deviation_)
    if (!(d >= 0.0))
      throw DomainError("deviations must be nonnegative");
}

std::string CandidateId::str() const {
  switch (rank) {
    case 0:
      return "0";
    case 1:
      return std::to_string(v[0]);
    case 2:
      return "(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + ")";
    default:
      return "(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + "," +
             std::to_string(v[2]) + "," + std::to_string(v[3]) + ")";
  }
}

double RobustSolution::metric(const std::string& key, double fallback) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  return fallback;
}

double worst_case_value(const TermEvaluation& eval, Gamma gamma) {
  const std::size_t m = eval.size();
  if (eval.deviations.size() != m)
    throw DomainError("term evaluation vectors have different lengths");
  if (gamma.value < 0 || static_cast<std::size_t>(gamma.value) > m)
    throw DomainError("gamma must lie in [0, " + std::to_string(m) +
                      "], got " + std::to_string(gamma.value));

  double total = 0.0;
  for (double v : eval.nominal_values) total += v;
  if (gamma.value == 0) return total;

  std::vector<double> ups;
  ups.reserve(m);
  for (double d : eval.deviations)
    if (d > 0.0) ups.push_back(d);
  const std::size_t take = std::min<std::size_t>(gamma.value, ups.size());
  std::partial_sort(ups.begin(), ups.begin() + take, ups.end(),
                    std::greater<double>());
  for (std::size_t i = 0; i < take; ++i) total += ups[i];
  return total;
}

namespace {

void check_budget_for_enumeration(std::size_t m, Gamma gamma) {
  if (gamma.value < 0 || static_cast<std::size_t>(gamma.value) > m)
    throw DomainError("gamma must lie in [0, " + std::to_string(m) +
                      "], got " + std::to_string(gamma.value));
}

}  // namespace

RobustSolution brute_force_robust_optimum(const EnumerableProblem& problem,
                                          Gamma gamma, std::size_t cap) {
  check_budget_for_enumeration(problem.term_count, gamma);

  RobustSolution best;
  best.value = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  problem.for_each([&](const std::any& point, const TermEvaluation& eval) {
    if (++count > cap)
      throw ResourceError("enumeration exceeds cap of " + std::to_string(cap) +
                          " points");
    const double wc = worst_case_value(eval, gamma);
    if (wc < best.value) {
      best.value = wc;
      best.point = point;
    }
  });
  if (count == 0) throw DomainError("problem has no feasible points");
  best.points_considered = count;
  best.winning = CandidateId::zero();
  best.log.push_back({CandidateId::zero(), 0.0, best.value, SolveStatus::kSolved});
  best.metrics.emplace_back("points_enumerated", static_cast<double>(count));
  return best;
}

RobustSolution generic_nofenchel_optimum(const EnumerableProblem& problem,
                                         Gamma gamma, std::size_t cap) {
  const std::size_t m = problem.term_count;
  check_budget_for_enumeration(m, gamma);
  if (gamma.value == 0)
    throw DomainError("the candidate sweep requires gamma in [1, m]; "
                      "evaluate the nominal problem directly for gamma = 0");

  // One enumeration pass caches every evaluation, then each candidate k is
  // scored against the cache.
  std::vector<std::any> points;
  std::vector<TermEvaluation> evals;
  std::size_t count = 0;
  problem.for_each([&](const std::any& point, const TermEvaluation& eval) {
    if (++count > cap)
      throw ResourceError("enumeration exceeds cap of " + std::to_string(cap) +
                          " points");
    points.push_back(point);
    evals.push_back(eval);
  });
  if (count == 0) throw DomainError("problem has no feasible points");

  auto theta = [](const TermEvaluation& e, std::size_t i) {
    return std::max(0.0, e.deviations[i]);
  };

  RobustSolution best;
  best.value = std::numeric_limits<double>::infinity();
  best.points_considered = count;
  std::size_t best_point = 0;
  for (std::size_t k = 0; k <= m; ++k) {
    double cand_value = std::numeric_limits<double>::infinity();
    std::size_t cand_point = 0;
    for (std::size_t p = 0; p < evals.size(); ++p) {
      const TermEvaluation& e = evals[p];
      const double theta_k = (k == 0) ? 0.0 : theta(e, k - 1);
      double obj = gamma.value * theta_k;
      for (std::size_t i = 0; i < m; ++i)
        obj += e.nominal_values[i] + std::max(0.0, theta(e, i) - theta_k);
      if (obj < cand_value) {
        cand_value = obj;
        cand_point = p;
      }
    }
    best.log.push_back({k == 0 ? CandidateId::zero()
                               : CandidateId::single(static_cast<int>(k)),
                        0.0, cand_value, SolveStatus::kSolved});
    if (cand_value < best.value) {
      best.value = cand_value;
      best.winning = best.log.back().candidate;
      best_point = cand_point;
    }
  }
  best.point = points[best_point];
  best.metrics.emplace_back("points_enumerated", static_cast<double>(count));
  best.metrics.emplace_back("candidates", static_cast<double>(m + 1));
  return best;
}

}  // namespace gammarobust
