#include "adiabatic/evolution.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace adiabatic {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

double max_schedule_scale(const Schedule& schedule) {
  if (schedule.kind() != ScheduleKind::Interpolation) return 1.0;
  constexpr int kSamples = 256;
  double largest = 0.0;
  for (int j = 0; j <= kSamples; ++j) {
    largest = std::max(largest, std::abs(schedule.at(schedule.runtime() * j / kSamples).scale));
  }
  return largest;
}

void validate_output_grid(std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("evolution output grid is empty");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0 && grid[j] <= 1.0)) {
      throw ConfigError(fmt::format("output grid value {} outside [0, 1]", grid[j]));
    }
    if (j > 0 && !(grid[j] > grid[j - 1])) throw ConfigError("output grid must be strictly increasing");
  }
}

}  // namespace

SchrodingerStepper::SchrodingerStepper(Generator generator, std::size_t dimension)
    : generator_(std::move(generator)),
      k1_(dimension),
      k2_(dimension),
      k3_(dimension),
      k4_(dimension),
      scratch_(dimension) {}

void SchrodingerStepper::derivative(double time, std::span<const Complex> in, std::span<Complex> out) {
  generator_(time, in, out);
  for (Complex& x : out) x *= kMinusI;
}

void SchrodingerStepper::step(double time, double dt, Amplitudes& b) {
  const std::size_t n = b.size();
  if (n != k1_.size()) throw LengthMismatch("state length differs from stepper dimension");

  derivative(time, b, k1_);
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = b[i] + 0.5 * dt * k1_[i];
  derivative(time + 0.5 * dt, scratch_, k2_);
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = b[i] + 0.5 * dt * k2_[i];
  derivative(time + 0.5 * dt, scratch_, k3_);
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = b[i] + dt * k3_[i];
  derivative(time + dt, scratch_, k4_);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] += (dt / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
}

double state_norm(std::span<const Complex> b) {
  double sum = 0.0;
  for (const Complex& x : b) sum += std::norm(x);
  return std::sqrt(sum);
}

Trajectory evolve(const ProblemSpec& problem, const Schedule& schedule, const EvolutionOptions& options) {
  if (!(options.dt > 0.0)) throw ConfigError(fmt::format("time step {} must be positive", options.dt));
  validate_output_grid(options.output_grid);

  const double runtime = schedule.runtime();
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(runtime / options.dt - 1e-9)));
  const double h = runtime / static_cast<double>(steps);
  const double norm_bound = max_schedule_scale(schedule) * hamiltonian_norm_bound(problem);
  if (h * norm_bound > options.stability_limit) {
    throw StepTooLarge(fmt::format("dt * ||H|| = {} * {} exceeds stability limit {}", h, norm_bound,
                                   options.stability_limit));
  }

  const std::size_t n = problem.dimension();
  SchrodingerStepper stepper(
      [&](double time, std::span<const Complex> in, std::span<Complex> out) {
        const ScheduleSample sample = schedule.at(time);
        Hamiltonian(problem, sample.s).apply<Complex>(in, out);
        if (sample.scale != 1.0) {
          for (Complex& x : out) x *= sample.scale;
        }
      },
      n);

  Trajectory traj;
  traj.step = h;
  traj.step_count = steps;

  Amplitudes b(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  const auto& grid = options.output_grid;
  std::size_t next_target = 0;
  auto time_of = [&](std::size_t k) { return k == steps ? runtime : static_cast<double>(k) * h; };
  double s_here = 0.0;

  for (std::size_t k = 0; k <= steps && next_target < grid.size(); ++k) {
    const double time = time_of(k);
    const double s_next = k < steps ? schedule.at(time_of(k + 1)).s : 2.0;
    bool recorded_here = false;
    while (next_target < grid.size() &&
           std::abs(s_here - grid[next_target]) <= std::abs(s_next - grid[next_target])) {
      if (recorded_here) {
        throw StepTooLarge(fmt::format("output grid spacing near s = {} is finer than the integrator step {}",
                                       grid[next_target], h));
      }
      const double norm = state_norm(b);
      traj.states.push_back(EvolutionState{time, s_here, b, norm});
      recorded_here = true;
      ++next_target;
    }
    if (k == steps) break;

    stepper.step(time, h, b);
    const double norm = state_norm(b);
    const double drift = std::abs(norm - 1.0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (!(drift <= options.norm_tolerance)) {
      throw NormDriftExceeded(fmt::format("norm drift {:.3e} exceeds {:.3e} at time {}", drift,
                                          options.norm_tolerance, time + h));
    }
    if (options.renormalize) {
      for (Complex& x : b) x /= norm;
    }
    s_here = s_next;
  }

  traj.fidelity.reserve(traj.states.size());
  traj.delta.reserve(traj.states.size());
  for (const EvolutionState& state : traj.states) {
    const GaugedOverlap g = gauge_fixed_overlap(state, ground_state(problem, state.s));
    traj.fidelity.push_back(g.overlap);
    traj.delta.push_back(g.delta);
  }
  return traj;
}

GaugedOverlap gauge_fixed_overlap(const EvolutionState& state, const GroundStateSolution& gs) {
  const std::size_t n = gs.a.size();
  if (state.b.size() != n) {
    throw LengthMismatch(fmt::format("state of length {} compared to ground state of length {}", state.b.size(), n));
  }
  Complex inner{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) inner += gs.a[i] * state.b[i];
  const double magnitude = std::abs(inner);
  const Complex phase = magnitude > 0.0 ? std::conj(inner) / magnitude : Complex(1.0, 0.0);

  GaugedOverlap out;
  out.overlap = magnitude;
  out.b_gauged.resize(n);
  double dist2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.b_gauged[i] = phase * state.b[i];
    dist2 += std::norm(gs.a[i] - out.b_gauged[i]);
  }
  out.delta = std::sqrt(dist2);
  return out;
}

ConvergenceResult convergence_probe(const ProblemSpec& problem, const Schedule& schedule,
                                    std::span<const double> dt_list) {
  if (dt_list.size() < 3) throw NonConvergent("convergence probe needs at least three step sizes");
  for (std::size_t j = 1; j < dt_list.size(); ++j) {
    if (!(dt_list[j] < dt_list[j - 1])) throw NonConvergent("convergence probe step sizes must be decreasing");
  }

  auto final_state = [&](double dt, double& effective) {
    EvolutionOptions opts;
    opts.dt = dt;
    opts.output_grid = {1.0};
    opts.norm_tolerance = 1e-3;
    const Trajectory traj = evolve(problem, schedule, opts);
    effective = traj.step;
    return traj.states.back().b;
  };

  double ref_step = 0.0;
  const Amplitudes reference = final_state(dt_list.back(), ref_step);

  ConvergenceResult result;
  for (std::size_t j = 0; j + 1 < dt_list.size(); ++j) {
    double step = 0.0;
    const Amplitudes b = final_state(dt_list[j], step);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) dist2 += std::norm(b[i] - reference[i]);
    result.points.push_back({step, std::sqrt(dist2)});
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const ConvergencePoint& p : result.points) {
    if (!(p.error > 0.0)) throw NonConvergent(fmt::format("zero self-convergence error at dt = {}", p.dt));
    const double x = std::log(p.dt);
    const double y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(result.points.size());
  result.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (!(result.order >= 2.0)) {
    throw NonConvergent(fmt::format("fitted convergence order {} is below 2", result.order));
  }
  return result;
}

std::vector<double> cumulative_probability(std::span<const Complex> b) {
  std::vector<double> out(b.size());
  double running = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    running += std::norm(b[i]);
    out[i] = running;
  }
  return out;
}

}  // namespace adiabatic
