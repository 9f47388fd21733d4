#include "gammarobust/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "gammarobust/problems.hpp"

namespace gammarobust::cli {

namespace {

using problems::QapInstance;
using problems::QapReductions;
using problems::QuadraticBinaryInstance;
using problems::SchedulingInstance;
using problems::VrpInstance;
using problems::VrpMethod;

std::size_t enumeration_cap() {
  if (const char* env = std::getenv("GAMMA_ROBUST_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw DomainError("GAMMA_ROBUST_CAP must be a positive integer");
  }
  return kDefaultEnumerationCap;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string basename(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::vector<double> read_numbers(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

Matrix builtin_qap_flow(int n) {
  if (n == 3) return Matrix::from_rows({{0, 2, 4}, {2, 0, 3}, {4, 3, 0}});
  return Matrix::from_rows(
      {{0, 3, 1, 2}, {3, 0, 5, 2}, {1, 5, 0, 4}, {2, 2, 4, 0}});
}

Matrix builtin_qap_dist(int n) {
  if (n == 3) return Matrix::from_rows({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  return Matrix::from_rows(
      {{0, 2, 3, 1}, {2, 0, 1, 4}, {3, 1, 0, 2}, {1, 4, 2, 0}});
}

io::VrpSkeleton builtin_vrp5() {
  io::VrpSkeleton s;
  s.name = "builtin:vrp5";
  s.n = 5;
  const double xs[] = {4, 1, 7, 3, 8, 5};
  const double ys[] = {4, 2, 1, 7, 6, 5};
  s.travel = Matrix(7, 7);
  auto cx = [&](int a) { return a == 6 ? xs[0] : xs[a]; };
  auto cy = [&](int a) { return a == 6 ? ys[0] : ys[a]; };
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      s.travel.at(a, b) = std::hypot(cx(a) - cx(b), cy(a) - cy(b));
  s.service = {1, 1, 1, 1, 1};
  s.due_nominal = {4, 6, 5, 9, 11};
  s.demand = {0, 0, 0, 0, 0};
  s.declared_vehicles = 3;
  return s;
}

struct Task {
  int gamma = 0;
  std::string config;
  std::function<RobustSolution()> solve;
  std::function<double()> brute;  // empty when verification is off
};

struct TaskOutcome {
  io::SweepRow row;
  bool mismatch = false;
  double brute_value = 0.0;
  std::exception_ptr error;
};

std::string reduce_name(ReduceMode mode) {
  switch (mode) {
    case ReduceMode::kNone:
      return "none";
    case ReduceMode::kSymmetry:
      return "symmetry";
    case ReduceMode::kRedNumber:
      return "rednumber";
    case ReduceMode::kAll:
      return "all";
  }
  return "?";
}

void run_tasks(std::vector<Task>& tasks, std::vector<TaskOutcome>& outcomes,
               int jobs, const std::string& instance_label) {
  outcomes.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      TaskOutcome& out = outcomes[i];
      try {
        const auto start = std::chrono::steady_clock::now();
        const RobustSolution sol = tasks[i].solve();
        const auto stop = std::chrono::steady_clock::now();
        out.row.instance = instance_label;
        out.row.gamma = tasks[i].gamma;
        out.row.config = tasks[i].config;
        out.row.value = sol.value;
        out.row.winner = sol.winning.str();
        out.row.subproblems = sol.points_considered > 0 ? sol.points_considered
                                                        : sol.log.size();
        out.row.oracle_calls = static_cast<std::size_t>(sol.metric(
            "oracle_calls", static_cast<double>(sol.points_considered)));
        out.row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                             stop - start)
                             .count();
        if (tasks[i].brute) {
          out.brute_value = tasks[i].brute();
          // NaN-safe: any non-finite reference value counts as a mismatch.
          out.mismatch =
              !(std::abs(out.brute_value - sol.value) <= kValueTolerance);
        }
      } catch (...) {
        out.error = std::current_exception();
      }
    }
  };
  const int thread_count = std::max(1, std::min<int>(jobs, tasks.size()));
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (TaskOutcome& out : outcomes)
    if (out.error) std::rethrow_exception(out.error);
}

std::vector<Task> build_tasks(const RunConfig& config, std::size_t cap,
                              std::string& instance_label) {
  std::vector<Task> tasks;
  const bool builtin = config.instance.rfind("builtin:", 0) == 0;

  switch (config.problem) {
    case ProblemKind::kQap: {
      Matrix flow, dist;
      if (builtin || config.instance.empty()) {
        const std::string id = builtin ? config.instance.substr(8) : "qap3";
        const int n = id == "qap4" ? 4 : 3;
        if (id != "qap3" && id != "qap4")
          throw DomainError("unknown built-in QAP instance '" + id + "'");
        flow = builtin_qap_flow(n);
        dist = builtin_qap_dist(n);
        instance_label = "builtin:" + id;
      } else {
        io::QaplibInstance file = io::parse_qaplib(read_file(config.instance));
        flow = config.swap_matrices ? file.second : file.first;
        dist = config.swap_matrices ? file.first : file.second;
        instance_label = basename(config.instance);
      }
      const Matrix deviation = io::generate_uncertainty(config.uncertainty, flow);
      auto inst = std::make_shared<QapInstance>(flow, deviation, dist);
      QapReductions reductions;
      switch (config.reduce) {
        case ReduceMode::kNone:
          break;
        case ReduceMode::kSymmetry:
          reductions.symmetry = true;
          break;
        case ReduceMode::kRedNumber:
          reductions.red_number = true;
          break;
        case ReduceMode::kAll:
          reductions.symmetry = inst->symmetric;
          reductions.red_number = true;
          reductions.dedup = true;
          break;
      }
      const std::string cfg = "reduce=" + reduce_name(config.reduce) + ";unc=" + config.uncertainty.str();
      for (int gamma : config.gammas) {
        Task t;
        t.gamma = gamma;
        t.config = cfg;
        t.solve = [inst, gamma, reductions]() {
          return problems::qap_robust_solve(*inst, Gamma{gamma}, reductions);
        };
        if (config.verify)
          t.brute = [inst, gamma, cap]() {
            return brute_force_robust_optimum(problems::enumerable_qap(*inst, cap),
                                              Gamma{gamma}, cap)
                .value;
          };
        tasks.push_back(std::move(t));
      }
      break;
    }
    case ProblemKind::kScheduling: {
      std::vector<double> proc, weights;
      if (builtin || config.instance.empty()) {
        const std::string id = builtin ? config.instance.substr(8) : "sched5";
        if (id != "sched5")
          throw DomainError("unknown built-in scheduling instance '" + id + "'");
        proc = {3, 1, 4, 1, 5};
        instance_label = "builtin:sched5";
      } else {
        const std::vector<double> nums = read_numbers(read_file(config.instance));
        if (nums.empty()) throw ParseError("empty scheduling file", 1, 1);
        if (nums[0] < 1 || nums[0] != std::floor(nums[0]))
          throw ParseError("job count must be a positive integer", 1, 1);
        const std::size_t m = static_cast<std::size_t>(nums[0]);
        if (nums.size() != 1 + m && nums.size() != 1 + 2 * m)
          throw ParseError("scheduling file must hold m then m processing times "
                           "and optionally m weights",
                           1, 1);
        proc.assign(nums.begin() + 1, nums.begin() + 1 + m);
        if (nums.size() == 1 + 2 * m)
          weights.assign(nums.begin() + 1 + m, nums.end());
        instance_label = basename(config.instance);
      }
      const std::vector<double> deviation =
          io::generate_uncertainty(config.uncertainty, proc);
      auto inst = std::make_shared<SchedulingInstance>(proc, deviation, weights);
      const bool red = config.reduce == ReduceMode::kRedNumber ||
                       config.reduce == ReduceMode::kAll;
      const std::string cfg = "reduce=" + reduce_name(config.reduce) + ";unc=" + config.uncertainty.str();
      for (int gamma : config.gammas) {
        Task t;
        t.gamma = gamma;
        t.config = cfg;
        t.solve = [inst, gamma, red]() {
          return problems::scheduling_robust_solve(*inst, Gamma{gamma}, red);
        };
        if (config.verify)
          t.brute = [inst, gamma, cap]() {
            return brute_force_robust_optimum(
                       problems::enumerable_scheduling(*inst, cap), Gamma{gamma},
                       cap)
                .value;
          };
        tasks.push_back(std::move(t));
      }
      break;
    }
    case ProblemKind::kQuadBin: {
      std::size_t n = 0;
      Matrix nominal;
      std::function<bool(const std::vector<int>&)> feasible;
      if (builtin || config.instance.empty()) {
        const std::string id = builtin ? config.instance.substr(8) : "quadbin4";
        if (id != "quadbin4")
          throw DomainError("unknown built-in quadbin instance '" + id + "'");
        n = 4;
        nominal = Matrix::from_rows({{2, 0, 0, 0},
                                     {1, 3, 0, 0},
                                     {4, 2, 1, 0},
                                     {1, 5, 2, 2}});
        feasible = [](const std::vector<int>& x) {
          int sum = 0;
          for (int b : x) sum += b;
          return sum >= 2;
        };
        instance_label = "builtin:quadbin4";
      } else {
        const std::vector<double> nums = read_numbers(read_file(config.instance));
        if (nums.empty()) throw ParseError("empty quadbin file", 1, 1);
        if (nums[0] < 1 || nums[0] != std::floor(nums[0]))
          throw ParseError("variable count must be a positive integer", 1, 1);
        n = static_cast<std::size_t>(nums[0]);
        if (nums.size() != 1 + n * n)
          throw ParseError("quadbin file must hold n then an n x n matrix", 1, 1);
        nominal = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            nominal.at(i, j) = nums[1 + i * n + j];
        instance_label = basename(config.instance);
      }
      const Matrix deviation =
          io::generate_uncertainty(config.uncertainty, nominal);
      auto inst = std::make_shared<QuadraticBinaryInstance>(n, nominal, deviation,
                                                            feasible, true);
      problems::QuadraticBinaryOptions options;
      if (config.reduce == ReduceMode::kRedNumber ||
          config.reduce == ReduceMode::kAll) {
        options.reduction = reform::PlanReduction::kRedNumber;
        options.early_prune = config.reduce == ReduceMode::kAll;
      }
      const std::string cfg = "reduce=" + reduce_name(config.reduce) + ";unc=" + config.uncertainty.str();
      for (int gamma : config.gammas) {
        Task t;
        t.gamma = gamma;
        t.config = cfg;
        t.solve = [inst, gamma, options, cap]() {
          return problems::quadratic_binary_robust_solve(*inst, Gamma{gamma},
                                                         options, cap);
        };
        if (config.verify)
          t.brute = [inst, gamma, cap]() {
            return brute_force_robust_optimum(
                       problems::enumerable_quadratic_binary(*inst, cap),
                       Gamma{gamma}, cap)
                .value;
          };
        tasks.push_back(std::move(t));
      }
      break;
    }
    case ProblemKind::kVrp: {
      io::VrpSkeleton skeleton;
      if (builtin || config.instance.empty()) {
        const std::string id = builtin ? config.instance.substr(8) : "vrp5";
        if (id != "vrp5")
          throw DomainError("unknown built-in VRP instance '" + id + "'");
        skeleton = builtin_vrp5();
        instance_label = skeleton.name;
      } else {
        skeleton = io::parse_solomon(read_file(config.instance), config.take_first);
        instance_label =
            basename(config.instance) + "#" + std::to_string(config.take_first);
      }
      const std::vector<double> due_deviation =
          io::generate_uncertainty(config.uncertainty, skeleton.due_nominal);
      const VrpMethod method = config.vrp_top_gamma ? VrpMethod::kDirectTopGamma
                                                    : VrpMethod::kNoFenchel2m1;
      const std::string method_name = config.vrp_top_gamma ? "topgamma" : "2m1";
      for (int gamma : config.gammas) {
        for (int k : config.vehicles) {
          auto inst = std::make_shared<VrpInstance>(
              io::make_vrp_instance(skeleton, k, due_deviation));
          Task t;
          t.gamma = gamma;
          t.config = "K=" + std::to_string(k) + ";method=" + method_name + ";unc=" + config.uncertainty.str();
          t.solve = [inst, gamma, method, cap]() {
            return problems::vrp_robust_solve(*inst, Gamma{gamma}, method, cap);
          };
          if (config.verify)
            t.brute = [inst, gamma, method, cap]() {
              const double brute =
                  brute_force_robust_optimum(problems::enumerable_vrp(*inst, cap),
                                             Gamma{gamma}, cap)
                      .value;
              const VrpMethod other = method == VrpMethod::kNoFenchel2m1
                                          ? VrpMethod::kDirectTopGamma
                                          : VrpMethod::kNoFenchel2m1;
              const double cross =
                  problems::vrp_robust_solve(*inst, Gamma{gamma}, other, cap).value;
              if (std::abs(cross - brute) > kValueTolerance)
                return std::numeric_limits<double>::quiet_NaN();
              return brute;
            };
          tasks.push_back(std::move(t));
        }
      }
      break;
    }
  }
  return tasks;
}

}  // namespace

std::vector<int> parse_gamma_list(const std::string& text) {
  std::vector<int> gammas;
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(text.substr(0, dots));
    const int b = std::stoi(text.substr(dots + 2));
    if (b < a) throw DomainError("empty gamma range " + text);
    for (int g = a; g <= b; ++g) gammas.push_back(g);
    return gammas;
  }
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ','))
    if (!part.empty()) gammas.push_back(std::stoi(part));
  if (gammas.empty()) throw DomainError("empty gamma list");
  return gammas;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.gammas.empty()) throw DomainError("no gamma values requested");
    const std::size_t cap = enumeration_cap();

    std::string instance_label;
    std::vector<Task> tasks = build_tasks(config, cap, instance_label);
    std::vector<TaskOutcome> outcomes;
    run_tasks(tasks, outcomes, config.jobs, instance_label);

    io::SweepResult sweep;
    bool any_mismatch = false;
    for (const TaskOutcome& outcome : outcomes) {
      sweep.rows.push_back(outcome.row);
      any_mismatch = any_mismatch || outcome.mismatch;
    }

    if (!config.csv_path.empty())
      io::write_sweep_csv(sweep, config.csv_path, config.timing);
    if (!config.svg_path.empty()) io::write_sweep_svg(sweep, config.svg_path);

    out << instance_label << "\n";
    out << std::left << std::setw(7) << "gamma" << std::setw(30) << "config"
        << std::setw(16) << "value" << std::setw(12) << "winner" << std::setw(10)
        << "subs" << std::setw(10) << "calls";
    if (config.timing) out << std::setw(8) << "ms";
    if (config.verify) out << "verify";
    out << "\n";
    for (const TaskOutcome& outcome : outcomes) {
      out << std::left << std::setw(7) << outcome.row.gamma << std::setw(30)
          << outcome.row.config << std::setw(16) << outcome.row.value
          << std::setw(12) << outcome.row.winner << std::setw(10)
          << outcome.row.subproblems << std::setw(10) << outcome.row.oracle_calls;
      if (config.timing) out << std::setw(8) << outcome.row.millis;
      if (config.verify)
        out << (outcome.mismatch ? "MISMATCH" : "ok");
      out << "\n";
      if (outcome.mismatch)
        err << "verification mismatch at gamma " << outcome.row.gamma << " ("
            << outcome.row.config << "): reformulation " << outcome.row.value
            << " vs brute force " << outcome.brute_value << "\n";
    }
    if (any_mismatch) return kExitVerifyMismatch;
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace gammarobust::cli
