#include "gammarobust/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace gammarobust::problems {

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

void require_nonnegative(const Matrix& m, const char* what) {
  for (double v : m.data())
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError(std::string(what) + " entries must be nonnegative and finite");
}

double factorial_capped(std::size_t n, std::size_t cap) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) {
    f *= static_cast<double>(i);
    if (f > static_cast<double>(cap)) return f;
  }
  return f;
}

}  // namespace

QapInstance::QapInstance(Matrix flow_nominal_in, Matrix flow_deviation_in,
                         Matrix dist_in)
    : flow_nominal(std::move(flow_nominal_in)),
      flow_deviation(std::move(flow_deviation_in)),
      dist(std::move(dist_in)) {
  if (!flow_nominal.is_square() || !flow_deviation.is_square() || !dist.is_square())
    throw DomainError("QAP matrices must be square");
  n = flow_nominal.rows();
  if (n == 0) throw DomainError("empty QAP instance");
  if (flow_deviation.rows() != n || dist.rows() != n)
    throw DomainError("QAP matrices must have equal size");
  require_nonnegative(flow_nominal, "flow");
  require_nonnegative(flow_deviation, "flow deviation");
  require_nonnegative(dist, "distance");
  symmetric = flow_nominal.is_symmetric() && flow_deviation.is_symmetric() &&
              dist.is_symmetric() && flow_nominal.has_zero_diagonal() &&
              flow_deviation.has_zero_diagonal() && dist.has_zero_diagonal();
}

RobustSolution qap_robust_solve(const QapInstance& inst, Gamma gamma,
                                const QapReductions& reductions,
                                int oracle_size_cap) {
  const std::size_t n = inst.n;
  require_budget(n * n, gamma);
  if (static_cast<int>(n) > oracle_size_cap)
    throw ResourceError("QAP size " + std::to_string(n) + " exceeds oracle cap " +
                        std::to_string(oracle_size_cap));
  if (reductions.symmetry && !inst.symmetric)
    throw DomainError("symmetry reduction needs symmetric zero-diagonal data");

  struct Cand {
    CandidateId id;
    double threshold = 0.0;
  };
  std::vector<Cand> cands;
  cands.push_back({CandidateId::zero(), 0.0});
  if (reductions.symmetry) {
    for (std::size_t k1 = 1; k1 <= n; ++k1)
      for (std::size_t k2 = k1 + 1; k2 <= n; ++k2)
        for (std::size_t k3 = 1; k3 <= n; ++k3)
          for (std::size_t k4 = 1; k4 <= n; ++k4)
            cands.push_back(
                {CandidateId::quad(static_cast<int>(k1), static_cast<int>(k2),
                                   static_cast<int>(k3), static_cast<int>(k4)),
                 inst.flow_deviation.at(k1 - 1, k2 - 1) * inst.dist.at(k3 - 1, k4 - 1)});
  } else {
    for (std::size_t k1 = 1; k1 <= n; ++k1)
      for (std::size_t k2 = 1; k2 <= n; ++k2)
        for (std::size_t k3 = 1; k3 <= n; ++k3)
          for (std::size_t k4 = 1; k4 <= n; ++k4)
            cands.push_back(
                {CandidateId::quad(static_cast<int>(k1), static_cast<int>(k2),
                                   static_cast<int>(k3), static_cast<int>(k4)),
                 inst.flow_deviation.at(k1 - 1, k2 - 1) * inst.dist.at(k3 - 1, k4 - 1)});
  }
  const std::size_t candidates_after_symmetry = cands.size();

  std::vector<char> keep(cands.size(), 1);
  if (reductions.red_number) {
    std::vector<double> flat(cands.size() - 1);
    for (std::size_t i = 1; i < cands.size(); ++i) flat[i - 1] = cands[i].threshold;
    const reform::CandidatePlan plan =
        reform::make_candidate_plan(flat, gamma, reform::PlanReduction::kRedNumber);
    std::fill(keep.begin(), keep.end(), 0);
    for (int c : plan.candidates) keep[static_cast<std::size_t>(c)] = 1;
  }

  RobustSolution sol;
  sol.value = kInf;
  std::size_t oracle_calls = 0;
  std::size_t considered = 0;
  std::map<std::vector<double>, std::pair<double, std::vector<int>>> cache;
  oracles::QapCostTensor tensor(n * n * n * n);
  for (std::size_t ci = 0; ci < cands.size(); ++ci) {
    if (!keep[ci]) continue;
    ++considered;
    const Cand& cand = cands[ci];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double nom = inst.flow_nominal.at(i, j);
        const double dev = inst.flow_deviation.at(i, j);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            const double d = inst.dist.at(r, s);
            tensor[((i * n + j) * n + r) * n + s] =
                nom * d + std::max(0.0, dev * d - cand.threshold);
          }
      }
    double value = 0.0;
    std::vector<int> perm;
    SolveStatus status = SolveStatus::kSolved;
    if (reductions.dedup) {
      auto it = cache.find(tensor);
      if (it != cache.end()) {
        value = it->second.first;
        perm = it->second.second;
        status = SolveStatus::kReused;
      }
    }
    if (status == SolveStatus::kSolved) {
      oracles::QapSolveResult res = oracles::qap_branch_and_bound(
          inst.flow_nominal, inst.dist, &tensor, oracle_size_cap);
      ++oracle_calls;
      value = res.value;
      perm = res.assignment.mapping;
      if (reductions.dedup) cache.emplace(tensor, std::make_pair(value, perm));
    }
    const double constant = gamma.value * cand.threshold;
    sol.log.push_back({cand.id, constant, value, status});
    if (constant + value < sol.value) {
      sol.value = constant + value;
      sol.winning = cand.id;
      sol.point = oracles::Permutation(perm);
    }
  }
  sol.metrics.emplace_back("candidates_unreduced",
                           static_cast<double>(n * n * n * n + 1));
  sol.metrics.emplace_back("candidates_after_symmetry",
                           static_cast<double>(candidates_after_symmetry));
  sol.metrics.emplace_back("candidates_after_rednumber",
                           static_cast<double>(considered));
  sol.metrics.emplace_back("oracle_calls", static_cast<double>(oracle_calls));
  return sol;
}

SchedulingInstance::SchedulingInstance(std::vector<double> proc_nominal_in,
                                       std::vector<double> proc_deviation_in,
                                       std::vector<double> positional_weights_in)
    : proc_nominal(std::move(proc_nominal_in)),
      proc_deviation(std::move(proc_deviation_in)),
      positional_weights(std::move(positional_weights_in)) {
  const std::size_t m = proc_nominal.size();
  if (m == 0) throw DomainError("scheduling instance needs at least one job");
  if (proc_deviation.size() != m)
    throw DomainError("processing deviation length mismatch");
  if (positional_weights.empty()) {
    positional_weights.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      positional_weights[i] = static_cast<double>(m - i);  // m+1-(i+1)
  }
  if (positional_weights.size() != m)
    throw DomainError("positional weight length mismatch");
  for (double q : positional_weights)
    if (!(q > 0.0)) throw DomainError("positional weights must be positive");
  for (double p : proc_nominal)
    if (!(p >= 0.0)) throw DomainError("processing times must be nonnegative");
  for (double d : proc_deviation)
    if (!(d >= 0.0)) throw DomainError("processing deviations must be nonnegative");
}

RobustSolution scheduling_robust_solve(const SchedulingInstance& inst, Gamma gamma,
                                       bool use_red_number) {
  const std::size_t m = inst.job_count();
  std::vector<std::vector<double>> blocks(m, inst.positional_weights);
  reform::AssignmentStructured structured(
      std::move(blocks),
      IntervalUncertainty(inst.proc_nominal, inst.proc_deviation),
      [](const Matrix& costs) {
        oracles::AssignmentSolution s =
            oracles::hungarian_solve(oracles::CostMatrix(costs));
        return reform::AssignmentOracleResult{std::any(s.assignment), s.value};
      });
  return reform::solve_assignment_structured(structured, gamma, use_red_number);
}

QuadraticBinaryInstance::QuadraticBinaryInstance(
    std::size_t n_in, const Matrix& nominal, const Matrix& deviation,
    std::function<bool(const std::vector<int>&)> feasible_in,
    bool include_diagonal_in)
    : n(n_in), include_diagonal(include_diagonal_in), feasible(std::move(feasible_in)) {
  if (n == 0) throw DomainError("empty quadratic binary instance");
  if (nominal.rows() < n || nominal.cols() < n || deviation.rows() < n ||
      deviation.cols() < n)
    throw DomainError("coefficient matrices smaller than n");
  for (int k = 1; k <= static_cast<int>(n); ++k)
    for (int l = 1; l <= (include_diagonal ? k : k - 1); ++l) {
      pairs.emplace_back(k, l);
      pair_nominal.push_back(nominal.at(k - 1, l - 1));
      const double d = deviation.at(k - 1, l - 1);
      if (!(d >= 0.0)) throw DomainError("pair deviations must be nonnegative");
      pair_deviation.push_back(d);
    }
  if (!feasible) feasible = [](const std::vector<int>&) { return true; };
}

namespace {

reform::ZeroOneLinearProblem quadratic_binary_problem(
    const QuadraticBinaryInstance& inst, std::size_t cap) {
  const std::size_t n = inst.n;
  if (n >= 63 || (std::uint64_t{1} << n) > cap)
    throw ResourceError("2^n exceeds the enumeration cap");
  reform::LinearOracle oracle = [&inst, n](const std::vector<double>& costs) {
    reform::LinearOracleResult best;
    best.value = kInf;
    std::vector<int> x(n, 0);
    std::vector<double> active(inst.pairs.size(), 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t b = 0; b < n; ++b) x[b] = (mask >> b) & 1 ? 1 : 0;
      if (!inst.feasible(x)) continue;
      double value = 0.0;
      for (std::size_t t = 0; t < inst.pairs.size(); ++t) {
        const auto [k, l] = inst.pairs[t];
        active[t] = static_cast<double>(x[k - 1] * x[l - 1]);
        value += costs[t] * active[t];
      }
      if (value < best.value) {
        best.value = value;
        best.point = x;
        best.active = active;
      }
    }
    if (best.value == kInf) throw DomainError("no feasible binary point");
    return best;
  };
  return {IntervalUncertainty(inst.pair_nominal, inst.pair_deviation),
          std::move(oracle), "binary quadratic enumeration oracle"};
}

}  // namespace

RobustSolution quadratic_binary_robust_solve(const QuadraticBinaryInstance& inst,
                                             Gamma gamma,
                                             const QuadraticBinaryOptions& options,
                                             std::size_t cap) {
  require_budget(inst.term_count(), gamma);
  reform::ZeroOneLinearProblem problem = quadratic_binary_problem(inst, cap);
  const reform::CandidatePlan plan =
      reform::make_candidate_plan(inst.pair_deviation, gamma, options.reduction);
  return reform::solve_pseudolin(problem, gamma, plan, {options.early_prune});
}

VrpInstance::VrpInstance(int n_in, int vehicles_in, Matrix travel_in,
                         std::vector<double> service_in,
                         std::vector<double> due_nominal_in,
                         std::vector<double> due_deviation_in)
    : n(n_in),
      vehicles(vehicles_in),
      travel(std::move(travel_in)),
      service(std::move(service_in)),
      due_nominal(std::move(due_nominal_in)),
      due_deviation(std::move(due_deviation_in)) {
  if (n < 0) throw DomainError("negative customer count");
  if (vehicles < 1) throw DomainError("need at least one vehicle");
  const std::size_t nodes = static_cast<std::size_t>(n) + 2;
  if (travel.rows() != nodes || travel.cols() != nodes)
    throw DomainError("travel matrix must be (n+2) x (n+2)");
  require_nonnegative(travel, "travel time");
  if (service.size() != static_cast<std::size_t>(n) ||
      due_nominal.size() != static_cast<std::size_t>(n) ||
      due_deviation.size() != static_cast<std::size_t>(n))
    throw DomainError("service/due vectors must have length n");
  for (double s : service)
    if (!(s >= 0.0)) throw DomainError("service times must be nonnegative");
  for (double d : due_deviation)
    if (!(d >= 0.0)) throw DomainError("due-time deviations must be nonnegative");
}

std::vector<double> vrp_earliest_arrivals(const VrpInstance& inst,
                                          const oracles::RoutePlan& plan) {
  std::vector<double> arrivals(static_cast<std::size_t>(inst.n), -1.0);
  std::vector<char> seen(static_cast<std::size_t>(inst.n) + 1, 0);
  for (const auto& route : plan) {
    if (route.empty()) throw DomainError("route plan contains an empty route");
    double t = 0.0;
    int prev = 0;  // depot
    for (int c : route) {
      if (c < 1 || c > inst.n) throw DomainError("route visits unknown customer");
      if (seen[c]) throw DomainError("customer visited twice");
      seen[c] = 1;
      const double srv = prev == 0 ? 0.0 : inst.service[prev - 1];
      t += srv + inst.travel.at(prev, c);
      arrivals[c - 1] = t;
      prev = c;
    }
  }
  for (int c = 1; c <= inst.n; ++c)
    if (!seen[c]) throw DomainError("customer " + std::to_string(c) + " unrouted");
  return arrivals;
}

namespace {

struct TardinessTerms {
  std::vector<double> nominal;  // max(0, T_i - b_i)
  std::vector<double> shifted;  // max(0, T_i - b_i + db_i)
};

TardinessTerms tardiness_terms(const std::vector<double>& arrivals,
                               const std::vector<double>& due_nominal,
                               const std::vector<double>& due_deviation) {
  const std::size_t m = arrivals.size();
  if (due_nominal.size() != m || due_deviation.size() != m)
    throw DomainError("arrival/due vector length mismatch");
  TardinessTerms t;
  t.nominal.resize(m);
  t.shifted.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    t.nominal[i] = std::max(0.0, arrivals[i] - due_nominal[i]);
    t.shifted[i] = std::max(0.0, arrivals[i] - due_nominal[i] + due_deviation[i]);
  }
  return t;
}

double dual_objective(const TardinessTerms& t, Gamma gamma, double theta) {
  double obj = gamma.value * theta;
  for (std::size_t i = 0; i < t.nominal.size(); ++i)
    obj += std::max(t.nominal[i], t.shifted[i] - theta);
  return obj;
}

// Evaluates the 2m+1 candidate expressions: the zero candidate plus, per
// customer k, the two due-time regimes (threshold db_k, and threshold at the
// clamped shifted tardiness of k). Returns the minimum and its candidate.
std::pair<double, CandidateId> candidate_sweep_value(
    const TardinessTerms& t, const std::vector<double>& due_deviation,
    Gamma gamma) {
  double best = dual_objective(t, gamma, 0.0);
  CandidateId winner = CandidateId::zero();
  const int m = static_cast<int>(t.nominal.size());
  for (int k = 1; k <= m; ++k) {
    const double regime1 = dual_objective(t, gamma, due_deviation[k - 1]);
    if (regime1 < best) {
      best = regime1;
      winner = CandidateId::pair(k, 1);
    }
    const double theta2 = std::max(0.0, t.shifted[k - 1]);
    const double regime2 = dual_objective(t, gamma, theta2);
    if (regime2 < best) {
      best = regime2;
      winner = CandidateId::pair(k, 2);
    }
  }
  return {best, winner};
}

}  // namespace

double robust_tardiness_for_arrivals(const std::vector<double>& arrivals,
                                     const std::vector<double>& due_nominal,
                                     const std::vector<double>& due_deviation,
                                     Gamma gamma, VrpMethod method) {
  const TardinessTerms t = tardiness_terms(arrivals, due_nominal, due_deviation);
  if (method == VrpMethod::kDirectTopGamma) {
    TermEvaluation eval;
    eval.nominal_values = t.nominal;
    eval.deviations.resize(t.nominal.size());
    for (std::size_t i = 0; i < t.nominal.size(); ++i)
      eval.deviations[i] = t.shifted[i] - t.nominal[i];
    return worst_case_value(eval, gamma);
  }
  require_budget(arrivals.size(), gamma);
  return candidate_sweep_value(t, due_deviation, gamma).first;
}

RobustSolution vrp_robust_solve(const VrpInstance& inst, Gamma gamma,
                                VrpMethod method, std::size_t cap) {
  require_budget(static_cast<std::size_t>(inst.n), gamma);

  RobustSolution sol;
  sol.value = kInf;
  oracles::RoutePlan best_plan;
  std::vector<double> best_arrivals;
  std::size_t count = 0;
  oracles::enumerate_routes(
      inst.n, inst.vehicles,
      [&](const oracles::RoutePlan& plan) {
        ++count;
        const std::vector<double> arrivals = vrp_earliest_arrivals(inst, plan);
        const double value = robust_tardiness_for_arrivals(
            arrivals, inst.due_nominal, inst.due_deviation, gamma, method);
        if (value < sol.value) {
          sol.value = value;
          best_plan = plan;
          best_arrivals = arrivals;
        }
      },
      cap);

  sol.point = best_plan;
  sol.points_considered = count;
  if (method == VrpMethod::kNoFenchel2m1) {
    const TardinessTerms t =
        tardiness_terms(best_arrivals, inst.due_nominal, inst.due_deviation);
    sol.winning = candidate_sweep_value(t, inst.due_deviation, gamma).second;
    sol.metrics.emplace_back("candidates_per_plan",
                             static_cast<double>(2 * inst.n + 1));
  } else {
    sol.winning = CandidateId::zero();
  }
  sol.log.push_back({sol.winning, 0.0, sol.value, SolveStatus::kSolved});
  sol.metrics.emplace_back("plans_enumerated", static_cast<double>(count));
  return sol;
}

EnumerableProblem enumerable_qap(const QapInstance& inst, std::size_t cap) {
  const std::size_t n = inst.n;
  if (factorial_capped(n, cap) > static_cast<double>(cap))
    throw ResourceError("QAP permutation enumeration exceeds cap");
  EnumerableProblem p;
  p.term_count = n * n;
  p.for_each = [inst, n](const std::function<void(const std::any&,
                                                  const TermEvaluation&)>& visit) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    TermEvaluation eval;
    eval.nominal_values.resize(n * n);
    eval.deviations.resize(n * n);
    do {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double d = inst.dist.at(perm[i], perm[j]);
          eval.nominal_values[i * n + j] = inst.flow_nominal.at(i, j) * d;
          eval.deviations[i * n + j] = inst.flow_deviation.at(i, j) * d;
        }
      visit(perm, eval);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  return p;
}

EnumerableProblem enumerable_scheduling(const SchedulingInstance& inst,
                                        std::size_t cap) {
  const std::size_t m = inst.job_count();
  if (factorial_capped(m, cap) > static_cast<double>(cap))
    throw ResourceError("schedule enumeration exceeds cap");
  EnumerableProblem p;
  p.term_count = m;
  p.for_each = [inst, m](const std::function<void(const std::any&,
                                                  const TermEvaluation&)>& visit) {
    std::vector<int> position(m);  // job j sits at position[j]
    std::iota(position.begin(), position.end(), 0);
    TermEvaluation eval;
    eval.nominal_values.resize(m);
    eval.deviations.resize(m);
    do {
      for (std::size_t j = 0; j < m; ++j) {
        const double q = inst.positional_weights[position[j]];
        eval.nominal_values[j] = inst.proc_nominal[j] * q;
        eval.deviations[j] = inst.proc_deviation[j] * q;
      }
      visit(position, eval);
    } while (std::next_permutation(position.begin(), position.end()));
  };
  return p;
}

EnumerableProblem enumerable_quadratic_binary(const QuadraticBinaryInstance& inst,
                                              std::size_t cap) {
  const std::size_t n = inst.n;
  if (n >= 63 || (std::uint64_t{1} << n) > cap)
    throw ResourceError("2^n exceeds the enumeration cap");
  EnumerableProblem p;
  p.term_count = inst.term_count();
  p.for_each = [inst, n](const std::function<void(const std::any&,
                                                  const TermEvaluation&)>& visit) {
    std::vector<int> x(n);
    TermEvaluation eval;
    eval.nominal_values.resize(inst.pairs.size());
    eval.deviations.resize(inst.pairs.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t b = 0; b < n; ++b) x[b] = (mask >> b) & 1 ? 1 : 0;
      if (!inst.feasible(x)) continue;
      for (std::size_t t = 0; t < inst.pairs.size(); ++t) {
        const auto [k, l] = inst.pairs[t];
        const double on = static_cast<double>(x[k - 1] * x[l - 1]);
        eval.nominal_values[t] = inst.pair_nominal[t] * on;
        eval.deviations[t] = inst.pair_deviation[t] * on;
      }
      visit(x, eval);
    }
  };
  return p;
}

EnumerableProblem enumerable_vrp(const VrpInstance& inst, std::size_t cap) {
  EnumerableProblem p;
  p.term_count = static_cast<std::size_t>(inst.n);
  p.for_each = [inst, cap](const std::function<void(const std::any&,
                                                    const TermEvaluation&)>& visit) {
    oracles::enumerate_routes(
        inst.n, inst.vehicles,
        [&](const oracles::RoutePlan& plan) {
          const std::vector<double> arrivals = vrp_earliest_arrivals(inst, plan);
          TermEvaluation eval;
          eval.nominal_values.resize(arrivals.size());
          eval.deviations.resize(arrivals.size());
          for (std::size_t i = 0; i < arrivals.size(); ++i) {
            const double nom = std::max(0.0, arrivals[i] - inst.due_nominal[i]);
            const double shifted = std::max(
                0.0, arrivals[i] - inst.due_nominal[i] + inst.due_deviation[i]);
            eval.nominal_values[i] = nom;
            eval.deviations[i] = shifted - nom;
          }
          visit(plan, eval);
        },
        cap);
  };
  return p;
}

}  // namespace gammarobust::problems
