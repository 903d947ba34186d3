#include "adiabatic/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

// Boost 1.74's pchip.hpp calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>
#include <fmt/format.h>

namespace adiabatic {

ProblemSpec build_problem(std::vector<double> f_raw, const ProblemOptions& options) {
  const std::size_t n_states = f_raw.size();
  if (n_states < 2) {
    throw NotPowerOfTwo(fmt::format("need at least 2 basis labels, got {}", n_states));
  }
  if (options.require_power_of_two && !std::has_single_bit(n_states)) {
    throw NotPowerOfTwo(fmt::format("number of cost values {} is not a power of two", n_states));
  }
  for (std::size_t i = 0; i < n_states; ++i) {
    if (!std::isfinite(f_raw[i])) {
      throw NonFiniteCost(fmt::format("cost of label {} is not finite", i));
    }
  }

  ProblemSpec p;
  p.qubits_ = static_cast<int>(std::bit_width(n_states - 1));
  p.perm_.resize(n_states);
  std::iota(p.perm_.begin(), p.perm_.end(), std::size_t{0});
  std::stable_sort(p.perm_.begin(), p.perm_.end(),
                   [&](std::size_t i, std::size_t j) { return f_raw[i] < f_raw[j]; });

  p.shift_ = f_raw[p.perm_.front()];
  p.costs_.resize(n_states);
  for (std::size_t i = 0; i < n_states; ++i) p.costs_[i] = f_raw[p.perm_[i]] - p.shift_;
  p.raw_costs_ = std::move(f_raw);

  const double n = static_cast<double>(p.qubits_);
  p.ceiling_ = options.cost_ceiling.value_or(n * n * n);
  if (options.strict_ceiling && p.exceeds_ceiling()) {
    throw CeilingExceeded(fmt::format("cost range {} exceeds ceiling {}", p.max_cost(), p.ceiling_));
  }
  return p;
}

ProblemSpec grover_problem(int qubits, std::size_t marked) {
  if (qubits < 1 || qubits > 30) throw ConfigError(fmt::format("qubit count {} out of range [1, 30]", qubits));
  const std::size_t n_states = std::size_t{1} << qubits;
  if (marked >= n_states) {
    throw ConfigError(fmt::format("marked label {} out of range for N = {}", marked, n_states));
  }
  std::vector<double> f(n_states, 1.0);
  f[marked] = 0.0;
  return build_problem(std::move(f));
}

ProblemSpec random_int_problem(int qubits, std::uint64_t seed) {
  if (qubits < 1 || qubits > 30) throw ConfigError(fmt::format("qubit count {} out of range [1, 30]", qubits));
  const std::size_t n_states = std::size_t{1} << qubits;
  const int top = qubits * qubits * qubits;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cost(0, top);
  std::vector<double> f(n_states);
  for (double& x : f) x = static_cast<double>(cost(rng));
  std::uniform_int_distribution<std::size_t> pick(0, n_states - 1);
  f[pick(rng)] = 0.0;
  return build_problem(std::move(f));
}

Hamiltonian::Hamiltonian(const ProblemSpec& problem, double s) : problem_(&problem), s_(s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError(fmt::format("path position s = {} outside [0, 1]", s));
}

Amplitudes apply_hamiltonian(const Hamiltonian& h, std::span<const Complex> v) { return h.apply<Complex>(v); }

Eigen::MatrixXd dense_hamiltonian(const Hamiltonian& h, std::size_t ceiling) {
  const auto f = h.problem().costs();
  const std::size_t n = f.size();
  if (n > ceiling) {
    throw OracleTooLarge(fmt::format("dense matrix of dimension {} exceeds oracle ceiling {}", n, ceiling));
  }
  const double s = h.s();
  const double off = -(1.0 - s) / static_cast<double>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), off);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    m(ii, ii) = (1.0 - s) * (1.0 - 1.0 / static_cast<double>(n)) + s * f[i];
  }
  return m;
}

double hamiltonian_norm_bound(const ProblemSpec& problem) { return std::max(1.0, problem.max_cost()); }

// ---------------------------------------------------------------------------
// Schedules

namespace {

constexpr int kMonotonicitySamples = 1024;

void check_runtime(double runtime) {
  if (!(runtime > 0.0) || !std::isfinite(runtime)) {
    throw ConfigError(fmt::format("runtime T = {} must be positive and finite", runtime));
  }
}

}  // namespace

Schedule Schedule::linear(double runtime) {
  check_runtime(runtime);
  return Schedule(ScheduleKind::Linear, runtime);
}

Schedule Schedule::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ConfigError("tabulated schedule needs at least two (t, s) knots");
  const auto [t0, s0] = knots.front();
  const auto [t1, s1] = knots.back();
  if (t0 != 0.0 || s0 != 0.0) throw NonMonotoneSchedule("tabulated schedule must start at (0, 0)");
  if (s1 != 1.0) throw NonMonotoneSchedule("tabulated schedule must end at s = 1");
  check_runtime(t1);

  Schedule sched(ScheduleKind::Tabulated, t1);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (i > 0 && !(knots[i].first > knots[i - 1].first)) {
      throw NonMonotoneSchedule(fmt::format("tabulated times not strictly increasing at knot {}", i));
    }
    if (i > 0 && !(knots[i].second > knots[i - 1].second)) {
      throw NonMonotoneSchedule(fmt::format("tabulated s not strictly increasing at knot {}", i));
    }
    sched.knot_times_.push_back(knots[i].first);
    sched.knot_values_.push_back(knots[i].second);
  }

  if (knots.size() >= 4) {
    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
    auto spline = std::make_shared<Pchip>(std::vector<double>(sched.knot_times_),
                                          std::vector<double>(sched.knot_values_));
    sched.pchip_value_ = [spline](double t) { return (*spline)(t); };
    sched.pchip_slope_ = [spline](double t) { return spline->prime(t); };
  }
  return sched;
}

Schedule Schedule::interpolation(double runtime, PathFunction f_path, PathFunction g_path) {
  check_runtime(runtime);
  if (!f_path || !g_path) throw ConfigError("interpolation schedule needs both path functions");
  constexpr double kEndpointTol = 1e-12;
  if (std::abs(f_path(0.0) - 1.0) > kEndpointTol || std::abs(g_path(0.0)) > kEndpointTol ||
      std::abs(f_path(runtime)) > kEndpointTol || std::abs(g_path(runtime) - 1.0) > kEndpointTol) {
    throw NonMonotoneSchedule("interpolation paths must satisfy f(0) = g(T) = 1 and f(T) = g(0) = 0");
  }

  Schedule sched(ScheduleKind::Interpolation, runtime);
  sched.f_path_ = std::move(f_path);
  sched.g_path_ = std::move(g_path);

  double previous = -1.0;
  for (int j = 0; j <= kMonotonicitySamples; ++j) {
    const double t = runtime * j / kMonotonicitySamples;
    const double total = sched.f_path_(t) + sched.g_path_(t);
    if (!(total > 0.0)) {
      throw NonMonotoneSchedule(fmt::format("f + g = {} is not positive at t = {}", total, t));
    }
    const double s = sched.position(t);
    if (!(s > previous)) {
      throw NonMonotoneSchedule(fmt::format("g/(f+g) is not strictly increasing near t = {}", t));
    }
    previous = s;
  }
  return sched;
}

double Schedule::position(double time) const {
  switch (kind_) {
    case ScheduleKind::Linear:
      return time / runtime_;
    case ScheduleKind::Tabulated: {
      if (pchip_value_) return std::clamp(pchip_value_(time), 0.0, 1.0);
      const auto it = std::upper_bound(knot_times_.begin(), knot_times_.end(), time);
      const std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - knot_times_.begin()), 1,
                                                     knot_times_.size() - 1);
      const double w = (time - knot_times_[hi - 1]) / (knot_times_[hi] - knot_times_[hi - 1]);
      return knot_values_[hi - 1] + w * (knot_values_[hi] - knot_values_[hi - 1]);
    }
    case ScheduleKind::Interpolation: {
      const double g = g_path_(time);
      return g / (f_path_(time) + g);
    }
  }
  return 0.0;
}

ScheduleSample Schedule::at(double time) const {
  const double slack = 1e-12 * runtime_;
  if (!(time >= -slack && time <= runtime_ + slack)) {
    throw TimeOutOfRange(fmt::format("time {} outside [0, {}]", time, runtime_));
  }
  time = std::clamp(time, 0.0, runtime_);

  // exact endpoints regardless of the interpolant
  ScheduleSample out{position(time), 0.0, 1.0};
  if (time == 0.0) out.s = 0.0;
  if (time == runtime_) out.s = 1.0;

  switch (kind_) {
    case ScheduleKind::Linear:
      out.rate = 1.0 / runtime_;
      break;
    case ScheduleKind::Tabulated:
      if (pchip_slope_) {
        out.rate = pchip_slope_(time);
      } else {
        const auto it = std::upper_bound(knot_times_.begin(), knot_times_.end(), time);
        const std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - knot_times_.begin()), 1,
                                                       knot_times_.size() - 1);
        out.rate = (knot_values_[hi] - knot_values_[hi - 1]) / (knot_times_[hi] - knot_times_[hi - 1]);
      }
      break;
    case ScheduleKind::Interpolation: {
      out.scale = f_path_(time) + g_path_(time);
      const double h = 1e-6 * runtime_;
      const double lo = std::max(0.0, time - h);
      const double hi = std::min(runtime_, time + h);
      out.rate = (position(hi) - position(lo)) / (hi - lo);
      break;
    }
  }
  return out;
}

double Schedule::time_at(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError(fmt::format("path position s = {} outside [0, 1]", s));
  if (kind_ == ScheduleKind::Linear) return s * runtime_;
  if (s == 0.0) return 0.0;
  if (s == 1.0) return runtime_;
  double lo = 0.0;
  double hi = runtime_;
  while (hi - lo > 1e-14 * runtime_) {
    const double mid = 0.5 * (lo + hi);
    (position(mid) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ScheduleSample eval_schedule(const Schedule& schedule, double time) { return schedule.at(time); }

}  // namespace adiabatic
