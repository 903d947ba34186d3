#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "adiabatic/evolution.hpp"
#include "adiabatic/ground.hpp"
#include "adiabatic/majorization.hpp"
#include "adiabatic/model.hpp"

namespace adiabatic {

/// {1, 2, N/2, N-1}, deduplicated and clipped to [1, N-1].
std::vector<std::size_t> default_k_list(std::size_t dimension);
/// 1..N-1 (the k = N partial sum is always 1).
std::vector<std::size_t> full_k_list(std::size_t dimension);

/// n uniformly spaced points from 0 to 1 inclusive.
std::vector<double> uniform_grid(std::size_t points);

/// Step-by-step majorization along a grid: verdicts[j] compares the
/// distribution at grid[j] with the one at grid[j+1].
struct MajorizationReport {
  std::vector<double> grid;
  std::vector<std::size_t> k_list;
  /// curves[j][m]: Lorenz partial sum of order k_list[m] at grid[j].
  std::vector<std::vector<double>> curves;
  std::vector<MajorizationVerdict> verdicts;
  double worst_deficit = 0.0;  // 0 when there are no verdicts
  std::size_t violation_count = 0;
};

MajorizationReport ground_report(const ProblemSpec& problem, std::span<const double> grid,
                                 std::span<const std::size_t> k_list,
                                 double tol = kDefaultMajorizationTolerance);

struct SandwichResult {
  /// max over samples and k of |A_k - B_k| / (2 sqrt(k) δ) (0 where δ = 0 and A_k = B_k).
  double max_consumed_fraction = 0.0;
  /// max over samples and k of |A_k - B_k|.
  double max_gap = 0.0;
  std::size_t checks = 0;
};

/// Verifies |A_k - B_k| <= 2 sqrt(k) δ + 1e-9 at every sample and every
/// k = 1..N, with A_k and B_k summed in canonical label order.
/// Throws SandwichViolation on the first failure.
SandwichResult sandwich_check(const ProblemSpec& problem, const Trajectory& traj);

struct TrajectoryReport {
  MajorizationReport majorization;
  SandwichResult sandwich;
};

/// Same comparison as ground_report over the evolved distributions.
/// Violations are expected for short runtimes and are only reported; the
/// sandwich bound is enforced as a hard check.
TrajectoryReport trajectory_report(const ProblemSpec& problem, const Trajectory& traj,
                                   std::span<const std::size_t> k_list,
                                   double tol = kDefaultMajorizationTolerance);

/// Margins of the lower bound dA_k/ds > (2c/k) A_k (1 - A_k), c = min{m, 1},
/// m = f(2) in canonical order.
struct BoundMargins {
  std::vector<double> grid;
  std::vector<std::size_t> k_list;
  /// margin[j][m] = dA_k/ds - (2c/k) A_k (1 - A_k) at grid[j], k = k_list[m].
  std::vector<std::vector<double>> margin;
  double c = 0.0;
  double m = 0.0;
  /// c = 0: the bound says nothing, margins are reported but not judged.
  bool vacuous = false;
  double min_margin = 0.0;
  bool all_positive = false;
};

BoundMargins growth_bound_margins(const ProblemSpec& problem, std::span<const double> grid,
                                  std::span<const std::size_t> k_list);

struct TailWindow {
  double lo = 0.8;
  double hi = 1.0;
};

/// Largest decrease of B_k (canonical order) between consecutive samples in
/// the tail window, maximized over k_list; 0 when every tail curve is
/// non-decreasing.
double oscillation_amplitude(const Trajectory& traj, TailWindow tail, std::span<const std::size_t> k_list);

/// Number of consecutive tail pairs where B_k decreases.
std::size_t tail_decrease_count(const Trajectory& traj, TailWindow tail, std::size_t k);

/// Runtime-dependent step size.
using StepRule = std::function<double(double runtime)>;

/// Default rule: min(0.01, 0.05 / ||H||, (1.44e-7 / (T ||H||^6))^(1/5)); the
/// last term keeps RK4 norm loss over the whole run below 1e-9.
StepRule default_step_rule(const ProblemSpec& problem);

struct SweepOptions {
  std::vector<double> runtimes;
  StepRule step_rule;
  TailWindow tail;
  std::vector<std::size_t> k_list;
  std::vector<double> grid;
  unsigned parallel = 1;
};

struct SweepResult {
  std::vector<double> T_list;
  std::vector<double> oscillation_amplitude;
  std::vector<double> max_delta;
  /// Each amplitude at most 10% above its predecessor.
  bool non_increasing = true;
  bool strictly_decreasing = true;
};

/// Linear-schedule evolutions for every runtime (independent runs, optionally
/// in parallel) and the tail oscillation of each.
SweepResult oscillation_sweep(const ProblemSpec& problem, const SweepOptions& options);

/// Sufficient-runtime criterion for a monotone tail: if the largest δ over
/// the tail is below δ* = (c / (2 k sqrt(k))) · min_tail A_k (1 - A_k) · Δs,
/// consecutive B_k values in the tail cannot decrease.
struct TailThreshold {
  std::size_t k = 1;
  double c = 0.0;
  double min_spread = 0.0;   // min over tail of A_k (1 - A_k)
  double grid_step = 0.0;    // smallest Δs between consecutive tail samples
  double delta_star = 0.0;
  double max_delta = 0.0;    // largest δ over tail samples
  bool saturated = false;    // min_spread ~ 0 or c = 0: threshold is vacuous
  bool premise = false;      // !saturated && max_delta < delta_star
  bool tail_monotone = false;
  /// premise implies tail_monotone.
  bool implication_holds = true;
};

TailThreshold tail_threshold(const ProblemSpec& problem, const Trajectory& traj, std::size_t k,
                             TailWindow tail = {});

}  // namespace adiabatic
