#include "gammarobust/reform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gammarobust::reform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_budget(std::size_t m, Gamma gamma) {
  if (gamma.value == 0)
    throw DomainError(
        "gamma = 0 is the nominal problem; call the nominal oracle directly");
  if (gamma.value < 0 || static_cast<std::size_t>(gamma.value) > m)
    throw DomainError("gamma must lie in [1, " + std::to_string(m) + "], got " +
                      std::to_string(gamma.value));
}

LinearOracleResult call_oracle(const ZeroOneLinearProblem& problem,
                               const std::vector<double>& costs,
                               const CandidateId& candidate) {
  LinearOracleResult res;
  try {
    res = problem.oracle(costs);
  } catch (const std::exception& e) {
    throw OracleError("oracle failed at candidate " + candidate.str() + ": " +
                      e.what());
  }
  if (res.active.size() != costs.size())
    throw OracleError("oracle returned activity vector of wrong length at candidate " +
                      candidate.str());
  double dot = 0.0;
  for (std::size_t j = 0; j < costs.size(); ++j) {
    const double a = res.active[j];
    if (std::abs(a) > kValueTolerance && std::abs(a - 1.0) > kValueTolerance)
      throw OracleError("oracle activity vector is not 0/1 at candidate " +
                        candidate.str());
    dot += costs[j] * a;
  }
  if (std::abs(dot - res.value) > kValueTolerance * std::max(1.0, std::abs(dot)))
    throw OracleError("oracle value disagrees with cost . activity at candidate " +
                      candidate.str());
  return res;
}

}  // namespace

CandidatePlan make_candidate_plan(const std::vector<double>& deviation,
                                  Gamma gamma, PlanReduction reduction) {
  const std::size_t m = deviation.size();
  if (m == 0) throw DomainError("deviation vector is empty");
  require_budget(m, gamma);

  CandidatePlan plan;
  plan.reduction = reduction;
  plan.sort_permutation.resize(m);
  std::iota(plan.sort_permutation.begin(), plan.sort_permutation.end(), 0);
  std::stable_sort(plan.sort_permutation.begin(), plan.sort_permutation.end(),
                   [&](int a, int b) { return deviation[a] > deviation[b]; });

  if (reduction == PlanReduction::kFull) {
    plan.candidates.resize(m + 1);
    std::iota(plan.candidates.begin(), plan.candidates.end(), 0);
    return plan;
  }

  // Sorted-space candidates gamma+1, gamma+3, ..., gamma+g with g the largest
  // odd integer below (m+1)-gamma, then the zero candidate (position m+1).
  const int g_limit = static_cast<int>(m) + 1 - gamma.value;
  int g = g_limit - 1;
  if (g % 2 == 0) --g;
  for (int k = gamma.value + 1; g >= 1 && k <= gamma.value + g; k += 2)
    plan.candidates.push_back(plan.sort_permutation[k - 1] + 1);
  plan.candidates.push_back(0);

  const std::size_t expected =
      static_cast<std::size_t>((m - gamma.value + 1) / 2) + 1;
  if (plan.candidates.size() != expected)
    throw Error("reduced plan cardinality bug: got " +
                std::to_string(plan.candidates.size()) + ", expected " +
                std::to_string(expected));
  return plan;
}

CandidatePlan early_prune(const CandidatePlan& plan,
                          const std::vector<SubproblemRecord>& solved,
                          Gamma gamma, const std::vector<double>& deviation) {
  if (solved.empty()) throw DomainError("early_prune needs a solved subproblem");
  double best_total = kInf;
  for (const auto& rec : solved)
    if (rec.status != SolveStatus::kPruned)
      best_total = std::min(best_total, rec.total());

  CandidatePlan pruned;
  pruned.reduction = plan.reduction;
  pruned.sort_permutation = plan.sort_permutation;
  for (int k : plan.candidates) {
    if (k == 0) {
      pruned.candidates.push_back(k);
      continue;
    }
    const double dev = deviation.at(static_cast<std::size_t>(k) - 1);
    if (best_total < gamma.value * dev) continue;  // strict: equal totals stay
    pruned.candidates.push_back(k);
  }
  return pruned;
}

namespace {

struct SweepEntry {
  int candidate = 0;
  double threshold = 0.0;
  std::size_t plan_pos = 0;
};

RobustSolution run_pseudolin_sweep(const ZeroOneLinearProblem& problem,
                                   Gamma gamma, const CandidatePlan& plan,
                                   bool early_prune_enabled) {
  const std::size_t m = problem.uncertainty.size();
  require_budget(m, gamma);
  const auto& nominal = problem.uncertainty.nominal();
  const auto& deviation = problem.uncertainty.deviation();

  if (plan.candidates.empty())
    throw DomainError("candidate plan is empty");
  for (int k : plan.candidates)
    if (k < 0 || static_cast<std::size_t>(k) > m)
      throw DomainError("plan candidate " + std::to_string(k) +
                        " out of range for m = " + std::to_string(m));
  if (plan.reduction == PlanReduction::kFull && plan.candidates.size() != m + 1)
    throw DomainError("full plan must have m+1 candidates");

  std::vector<SweepEntry> order;
  order.reserve(plan.candidates.size());
  for (std::size_t p = 0; p < plan.candidates.size(); ++p) {
    const int k = plan.candidates[p];
    order.push_back({k, k == 0 ? 0.0 : deviation[k - 1], p});
  }
  if (early_prune_enabled) {
    // Ascending threshold: cheap totals first so the constant-based cutoff
    // can drop expensive candidates before they are solved.
    std::stable_sort(order.begin(), order.end(),
                     [](const SweepEntry& a, const SweepEntry& b) {
                       return a.threshold < b.threshold;
                     });
  }

  std::vector<SubproblemRecord> records(plan.candidates.size());
  std::vector<std::any> points(plan.candidates.size());
  std::vector<char> have(plan.candidates.size(), 0);
  double best_total = kInf;
  std::size_t oracle_calls = 0;

  std::vector<double> costs(m);
  for (const SweepEntry& entry : order) {
    const CandidateId id = entry.candidate == 0
                               ? CandidateId::zero()
                               : CandidateId::single(entry.candidate);
    const double constant = gamma.value * entry.threshold;
    if (early_prune_enabled && entry.candidate != 0 && best_total < constant) {
      records[entry.plan_pos] = {id, constant, 0.0, SolveStatus::kPruned};
      have[entry.plan_pos] = 1;
      continue;
    }
    for (std::size_t j = 0; j < m; ++j)
      costs[j] = nominal[j] + std::max(0.0, deviation[j] - entry.threshold);
    LinearOracleResult res = call_oracle(problem, costs, id);
    ++oracle_calls;
    records[entry.plan_pos] = {id, constant, res.value, SolveStatus::kSolved};
    points[entry.plan_pos] = std::move(res.point);
    have[entry.plan_pos] = 1;
    best_total = std::min(best_total, constant + res.value);
  }

  RobustSolution sol;
  sol.value = kInf;
  std::size_t win_pos = 0;
  for (std::size_t p = 0; p < records.size(); ++p) {
    if (!have[p] || records[p].status == SolveStatus::kPruned) continue;
    if (records[p].total() < sol.value) {
      sol.value = records[p].total();
      win_pos = p;
    }
  }
  sol.winning = records[win_pos].candidate;
  sol.point = points[win_pos];
  sol.log.assign(records.begin(), records.end());
  sol.metrics.emplace_back("oracle_calls", static_cast<double>(oracle_calls));
  sol.metrics.emplace_back("candidates", static_cast<double>(plan.candidates.size()));
  return sol;
}

}  // namespace

RobustSolution solve_pseudolin(const ZeroOneLinearProblem& problem, Gamma gamma,
                               const CandidatePlan& plan,
                               const PseudoLinOptions& options) {
  return run_pseudolin_sweep(problem, gamma, plan, options.early_prune);
}

RobustSolution solve_bertsimas_sim(const ZeroOneLinearProblem& problem,
                                   Gamma gamma) {
  require_budget(problem.uncertainty.size(), gamma);
  const CandidatePlan plan = make_candidate_plan(
      problem.uncertainty.deviation(), gamma, PlanReduction::kFull);
  return run_pseudolin_sweep(problem, gamma, plan, false);
}

AssignmentStructured::AssignmentStructured(
    std::vector<std::vector<double>> block_rows_in,
    IntervalUncertainty uncertainty_in,
    std::function<AssignmentOracleResult(const Matrix&)> oracle_in)
    : block_rows(std::move(block_rows_in)),
      uncertainty(std::move(uncertainty_in)),
      oracle(std::move(oracle_in)) {
  if (block_rows.empty() || block_rows.front().empty())
    throw DomainError("assignment structure needs at least one block and column");
  if (block_rows.size() != uncertainty.size())
    throw DomainError("block count must match the uncertainty dimension");
  const std::size_t n = block_rows.front().size();
  for (const auto& row : block_rows) {
    if (row.size() != n) throw DomainError("ragged block rows");
    for (double b : row)
      if (!(b >= 0.0) || !std::isfinite(b))
        throw DomainError("block entries must be nonnegative and finite");
  }
  for (double u : uncertainty.nominal())
    if (!(u >= 0.0)) throw DomainError("nominal multipliers must be nonnegative");
}

RobustSolution solve_assignment_structured(const AssignmentStructured& problem,
                                           Gamma gamma, bool use_red_number) {
  const std::size_t m = problem.block_count();
  const std::size_t n = problem.column_count();
  require_budget(m, gamma);
  const auto& nominal = problem.uncertainty.nominal();
  const auto& deviation = problem.uncertainty.deviation();

  // Candidate list in iteration order: (0,0) first, then row-major (k,l).
  struct Cand {
    CandidateId id;
    double threshold = 0.0;
  };
  std::vector<Cand> cands;
  cands.push_back({CandidateId::zero(), 0.0});
  for (std::size_t k = 1; k <= m; ++k)
    for (std::size_t l = 1; l <= n; ++l)
      cands.push_back({CandidateId::pair(static_cast<int>(k), static_cast<int>(l)),
                       deviation[k - 1] * problem.block_rows[k - 1][l - 1]});

  std::vector<char> keep(cands.size(), 1);
  if (use_red_number) {
    std::vector<double> flat(m * n);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < n; ++l)
        flat[k * n + l] = deviation[k] * problem.block_rows[k][l];
    const CandidatePlan plan =
        make_candidate_plan(flat, gamma, PlanReduction::kRedNumber);
    std::fill(keep.begin(), keep.end(), 0);
    for (int c : plan.candidates)
      keep[static_cast<std::size_t>(c)] = 1;  // flat index c-1 = list slot c
  }

  RobustSolution sol;
  sol.value = kInf;
  std::size_t oracle_calls = 0;
  Matrix costs(m, n);
  for (std::size_t ci = 0; ci < cands.size(); ++ci) {
    if (!keep[ci]) continue;
    const Cand& cand = cands[ci];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double base = nominal[i] * problem.block_rows[i][j];
        const double dev = deviation[i] * problem.block_rows[i][j];
        costs.at(i, j) = base + std::max(0.0, dev - cand.threshold);
      }
    AssignmentOracleResult res;
    try {
      res = problem.oracle(costs);
    } catch (const std::exception& e) {
      throw OracleError("oracle failed at candidate " + cand.id.str() + ": " +
                        e.what());
    }
    ++oracle_calls;
    const double constant = gamma.value * cand.threshold;
    sol.log.push_back({cand.id, constant, res.value, SolveStatus::kSolved});
    if (constant + res.value < sol.value) {
      sol.value = constant + res.value;
      sol.winning = cand.id;
      sol.point = std::move(res.point);
    }
  }
  sol.metrics.emplace_back("oracle_calls", static_cast<double>(oracle_calls));
  sol.metrics.emplace_back("candidates", static_cast<double>(sol.log.size()));
  return sol;
}

RobustSolution solve_with_approx_oracle(const ZeroOneLinearProblem& problem,
                                        Gamma gamma, double alpha) {
  if (!(alpha >= 1.0))
    throw DomainError("approximation factor must be at least 1");
  const CandidatePlan plan = make_candidate_plan(
      problem.uncertainty.deviation(), gamma, PlanReduction::kFull);
  RobustSolution sol = run_pseudolin_sweep(problem, gamma, plan, false);
  sol.metrics.emplace_back("alpha", alpha);
  return sol;
}

}  // namespace gammarobust::reform
