#include "adiabatic/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include <fmt/format.h>

namespace adiabatic {

namespace {

constexpr double kSandwichSlack = 1e-9;

void validate_k_list(std::span<const std::size_t> k_list, std::size_t dimension) {
  for (std::size_t k : k_list) {
    if (k < 1 || k > dimension) throw ConfigError(fmt::format("k = {} outside [1, {}]", k, dimension));
  }
}

void validate_increasing_grid(std::span<const double> grid) {
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0 && grid[j] <= 1.0)) throw ConfigError(fmt::format("grid value {} outside [0, 1]", grid[j]));
    if (j > 0 && !(grid[j] > grid[j - 1])) throw ConfigError("grid must be strictly increasing");
  }
}

std::vector<double> pick(std::span<const double> values, std::span<const std::size_t> k_list) {
  std::vector<double> out;
  out.reserve(k_list.size());
  for (std::size_t k : k_list) out.push_back(values[k - 1]);
  return out;
}

MajorizationReport fold_curves(std::vector<double> grid, std::span<const std::size_t> k_list,
                               const std::vector<PartialSumCurve>& lorenz, double tol) {
  MajorizationReport report;
  report.grid = std::move(grid);
  report.k_list.assign(k_list.begin(), k_list.end());
  for (const PartialSumCurve& curve : lorenz) report.curves.push_back(pick(curve.values(), k_list));
  for (std::size_t j = 0; j + 1 < lorenz.size(); ++j) {
    const MajorizationVerdict verdict = check_majorization(lorenz[j], lorenz[j + 1], tol);
    if (report.verdicts.empty() || verdict.deficit < report.worst_deficit) report.worst_deficit = verdict.deficit;
    if (verdict.relation == Relation::NotMajorized) ++report.violation_count;
    report.verdicts.push_back(verdict);
  }
  return report;
}

// A_k (1 - A_k) with the complement summed from the tail.
double spread(const GroundStateSolution& gs, std::size_t k) {
  double tail = 0.0;
  for (std::size_t i = k; i < gs.a.size(); ++i) tail += gs.a[i] * gs.a[i];
  return gs.A[k - 1] * tail;
}

double bound_constant(const ProblemSpec& problem) { return std::min(problem.costs()[1], 1.0); }

template <typename Visit>
void for_each_tail_pair(const Trajectory& traj, TailWindow tail, Visit&& visit) {
  for (std::size_t j = 0; j + 1 < traj.states.size(); ++j) {
    const double s0 = traj.states[j].s;
    const double s1 = traj.states[j + 1].s;
    if (s0 >= tail.lo && s1 <= tail.hi) visit(j);
  }
}

}  // namespace

std::vector<std::size_t> default_k_list(std::size_t dimension) {
  std::set<std::size_t> ks;
  for (std::size_t k : {std::size_t{1}, std::size_t{2}, dimension / 2, dimension - 1}) {
    if (k >= 1 && k <= dimension - 1) ks.insert(k);
  }
  return {ks.begin(), ks.end()};
}

std::vector<std::size_t> full_k_list(std::size_t dimension) {
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k < dimension; ++k) ks.push_back(k);
  return ks;
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw ConfigError(fmt::format("grid needs at least 2 points, got {}", points));
  std::vector<double> grid(points);
  for (std::size_t j = 0; j < points; ++j) grid[j] = static_cast<double>(j) / static_cast<double>(points - 1);
  return grid;
}

MajorizationReport ground_report(const ProblemSpec& problem, std::span<const double> grid,
                                 std::span<const std::size_t> k_list, double tol) {
  validate_increasing_grid(grid);
  validate_k_list(k_list, problem.dimension());
  std::vector<PartialSumCurve> lorenz;
  lorenz.reserve(grid.size());
  for (double s : grid) {
    const GroundStateSolution gs = ground_state(problem, s);
    std::vector<double> p(gs.a.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = gs.a[i] * gs.a[i];
    lorenz.push_back(partial_sums(Distribution(std::move(p))));
  }
  return fold_curves({grid.begin(), grid.end()}, k_list, lorenz, tol);
}

SandwichResult sandwich_check(const ProblemSpec& problem, const Trajectory& traj) {
  if (traj.delta.size() != traj.states.size()) throw ConfigError("trajectory carries no per-sample delta");
  SandwichResult result;
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const EvolutionState& state = traj.states[j];
    const GroundStateSolution gs = ground_state(problem, state.s);
    const std::vector<double> B = cumulative_probability(state.b);
    const double delta = traj.delta[j];
    for (std::size_t k = 1; k <= B.size(); ++k) {
      const double gap = std::abs(gs.A[k - 1] - B[k - 1]);
      const double bound = 2.0 * std::sqrt(static_cast<double>(k)) * delta;
      ++result.checks;
      result.max_gap = std::max(result.max_gap, gap);
      if (bound > 0.0) result.max_consumed_fraction = std::max(result.max_consumed_fraction, gap / bound);
      if (!(gap <= bound + kSandwichSlack)) {
        throw SandwichViolation(fmt::format(
            "|A_k - B_k| = {:.3e} exceeds 2 sqrt(k) delta = {:.3e} at s = {}, k = {} (gauge or integrator fault)",
            gap, bound, state.s, k));
      }
    }
  }
  return result;
}

TrajectoryReport trajectory_report(const ProblemSpec& problem, const Trajectory& traj,
                                   std::span<const std::size_t> k_list, double tol) {
  validate_k_list(k_list, problem.dimension());
  TrajectoryReport out;
  out.sandwich = sandwich_check(problem, traj);

  std::vector<double> grid;
  std::vector<PartialSumCurve> lorenz;
  for (const EvolutionState& state : traj.states) {
    grid.push_back(state.s);
    lorenz.push_back(partial_sums(distribution_from_state(state.b, 1e-6)));
  }
  out.majorization = fold_curves(std::move(grid), k_list, lorenz, tol);
  return out;
}

BoundMargins growth_bound_margins(const ProblemSpec& problem, std::span<const double> grid,
                                  std::span<const std::size_t> k_list) {
  validate_k_list(k_list, problem.dimension());
  BoundMargins out;
  out.grid.assign(grid.begin(), grid.end());
  out.k_list.assign(k_list.begin(), k_list.end());
  out.m = problem.costs()[1];
  out.c = bound_constant(problem);
  out.vacuous = !(out.c > 0.0);
  out.min_margin = std::numeric_limits<double>::infinity();

  for (double s : grid) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError(fmt::format("bound grid value {} is not interior to (0, 1)", s));
    const GroundStateSolution gs = ground_state(problem, s);
    const GroundDerivatives d = ground_derivatives(problem, s);
    std::vector<double> row;
    for (std::size_t k : k_list) {
      const double rhs = 2.0 * out.c / static_cast<double>(k) * spread(gs, k);
      row.push_back(d.dA_ds[k - 1] - rhs);
      out.min_margin = std::min(out.min_margin, row.back());
    }
    out.margin.push_back(std::move(row));
  }
  out.all_positive = !out.vacuous && out.min_margin > 0.0;
  return out;
}

double oscillation_amplitude(const Trajectory& traj, TailWindow tail, std::span<const std::size_t> k_list) {
  double amplitude = 0.0;
  std::vector<std::vector<double>> cumulative;
  cumulative.reserve(traj.states.size());
  for (const EvolutionState& state : traj.states) cumulative.push_back(cumulative_probability(state.b));
  for_each_tail_pair(traj, tail, [&](std::size_t j) {
    for (std::size_t k : k_list) {
      amplitude = std::max(amplitude, cumulative[j][k - 1] - cumulative[j + 1][k - 1]);
    }
  });
  return amplitude;
}

std::size_t tail_decrease_count(const Trajectory& traj, TailWindow tail, std::size_t k) {
  std::size_t count = 0;
  for_each_tail_pair(traj, tail, [&](std::size_t j) {
    const double before = cumulative_probability(traj.states[j].b)[k - 1];
    const double after = cumulative_probability(traj.states[j + 1].b)[k - 1];
    if (after < before) ++count;
  });
  return count;
}

StepRule default_step_rule(const ProblemSpec& problem) {
  const double norm = hamiltonian_norm_bound(problem);
  return [norm](double runtime) {
    // RK4 shrinks the norm by about (h ||H||)^6 / 144 per step; keep the
    // accumulated loss T ||H||^6 h^5 / 144 below 1e-9.
    const double drift_limited = std::pow(144e-9 / (runtime * std::pow(norm, 6)), 0.2);
    return std::min({0.01, 0.05 / norm, drift_limited});
  };
}

SweepResult oscillation_sweep(const ProblemSpec& problem, const SweepOptions& options) {
  const auto& runtimes = options.runtimes;
  if (runtimes.empty()) throw ConfigError("sweep needs at least one runtime");
  for (std::size_t j = 1; j < runtimes.size(); ++j) {
    if (!(runtimes[j] > runtimes[j - 1])) throw ConfigError("sweep runtimes must be strictly increasing");
  }
  if (!(options.tail.lo > 0.0 && options.tail.lo < options.tail.hi && options.tail.hi <= 1.0)) {
    throw ConfigError("tail window must lie inside (0, 1]");
  }
  validate_k_list(options.k_list, problem.dimension());
  const StepRule rule = options.step_rule ? options.step_rule : default_step_rule(problem);
  const std::vector<double> grid = options.grid.empty() ? uniform_grid(1001) : options.grid;

  SweepResult result;
  result.T_list = runtimes;
  result.oscillation_amplitude.assign(runtimes.size(), 0.0);
  result.max_delta.assign(runtimes.size(), 0.0);
  std::vector<std::exception_ptr> failures(runtimes.size());

  auto run_one = [&](std::size_t j) {
    try {
      EvolutionOptions opts;
      opts.dt = rule(runtimes[j]);
      opts.output_grid = grid;
      const Trajectory traj = evolve(problem, Schedule::linear(runtimes[j]), opts);
      result.oscillation_amplitude[j] = oscillation_amplitude(traj, options.tail, options.k_list);
      result.max_delta[j] = *std::max_element(traj.delta.begin(), traj.delta.end());
    } catch (...) {
      failures[j] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.parallel, static_cast<unsigned>(runtimes.size())));
  if (workers == 1) {
    for (std::size_t j = 0; j < runtimes.size(); ++j) run_one(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < runtimes.size(); j = next++) run_one(j);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t j = 1; j < runtimes.size(); ++j) {
    const double prev = result.oscillation_amplitude[j - 1];
    const double cur = result.oscillation_amplitude[j];
    if (cur > 1.1 * prev) result.non_increasing = false;
    if (!(cur < prev)) result.strictly_decreasing = false;
  }
  return result;
}

TailThreshold tail_threshold(const ProblemSpec& problem, const Trajectory& traj, std::size_t k, TailWindow tail) {
  if (k < 1 || k > problem.dimension()) throw ConfigError(fmt::format("k = {} out of range", k));
  TailThreshold out;
  out.k = k;
  out.c = bound_constant(problem);
  out.min_spread = std::numeric_limits<double>::infinity();
  out.grid_step = std::numeric_limits<double>::infinity();

  bool any = false;
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const double s = traj.states[j].s;
    if (s < tail.lo || s > tail.hi) continue;
    any = true;
    out.min_spread = std::min(out.min_spread, spread(ground_state(problem, s), k));
    out.max_delta = std::max(out.max_delta, traj.delta[j]);
  }
  if (!any) throw ConfigError("no trajectory samples inside the tail window");

  out.tail_monotone = true;
  for_each_tail_pair(traj, tail, [&](std::size_t j) {
    out.grid_step = std::min(out.grid_step, traj.states[j + 1].s - traj.states[j].s);
    const double before = cumulative_probability(traj.states[j].b)[k - 1];
    const double after = cumulative_probability(traj.states[j + 1].b)[k - 1];
    if (after < before) out.tail_monotone = false;
  });
  if (!std::isfinite(out.grid_step)) out.grid_step = 0.0;

  const double kk = static_cast<double>(k);
  out.delta_star = out.c / (2.0 * kk * std::sqrt(kk)) * out.min_spread * out.grid_step;
  out.saturated = !(out.c > 0.0) || out.min_spread <= 1e-14;
  out.premise = !out.saturated && out.max_delta < out.delta_star;
  out.implication_holds = !out.premise || out.tail_monotone;
  return out;
}

}  // namespace adiabatic
