#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "adiabatic/errors.hpp"
#include "adiabatic/majorization.hpp"

namespace adiabatic {

/// Largest dimension for which dense matrices are built.
inline constexpr std::size_t kDefaultOracleCeiling = std::size_t{1} << 12;

struct ProblemOptions {
  /// Upper bound on the shifted costs. Defaults to n^3.
  std::optional<double> cost_ceiling;
  /// Throw CeilingExceeded instead of only flagging the problem.
  bool strict_ceiling = false;
  bool require_power_of_two = true;
};

/// Cost function over N basis labels in canonical form: shifted so the
/// minimum is 0 and sorted ascending, with the sorting permutation kept so
/// results can be reported against the caller's labels.
class ProblemSpec {
 public:
  /// Qubit count n (ceil(log2 N) when the power-of-two guard is off).
  int qubits() const noexcept { return qubits_; }
  std::size_t dimension() const noexcept { return costs_.size(); }

  /// Canonical costs: ascending, costs()[0] == 0.
  std::span<const double> costs() const noexcept { return costs_; }
  std::span<const double> raw_costs() const noexcept { return raw_costs_; }
  double shift() const noexcept { return shift_; }
  double max_cost() const noexcept { return costs_.back(); }
  double cost_ceiling() const noexcept { return ceiling_; }
  bool exceeds_ceiling() const noexcept { return max_cost() > ceiling_; }

  /// permutation()[i] is the original (0-based) label of canonical index i.
  std::span<const std::size_t> permutation() const noexcept { return perm_; }

  /// Reorders a canonical-order vector into original label order.
  template <typename T>
  std::vector<T> to_original_labels(std::span<const T> canonical) const {
    if (canonical.size() != dimension()) throw LengthMismatch("vector length differs from problem dimension");
    std::vector<T> out(canonical.size());
    for (std::size_t i = 0; i < canonical.size(); ++i) out[perm_[i]] = canonical[i];
    return out;
  }

  /// Reorders an original-label vector into canonical order.
  template <typename T>
  std::vector<T> to_canonical(std::span<const T> original) const {
    if (original.size() != dimension()) throw LengthMismatch("vector length differs from problem dimension");
    std::vector<T> out(original.size());
    for (std::size_t i = 0; i < original.size(); ++i) out[i] = original[perm_[i]];
    return out;
  }

  friend ProblemSpec build_problem(std::vector<double> f_raw, const ProblemOptions& options);

 private:
  ProblemSpec() = default;

  int qubits_ = 0;
  std::vector<double> raw_costs_;
  std::vector<double> costs_;
  double shift_ = 0.0;
  double ceiling_ = 0.0;
  std::vector<std::size_t> perm_;
};

/// Validates and canonicalizes a cost vector. Ties keep ascending original
/// label order. Throws NotPowerOfTwo, NonFiniteCost, and (strict mode only)
/// CeilingExceeded.
ProblemSpec build_problem(std::vector<double> f_raw, const ProblemOptions& options = {});

/// Search family: cost 0 on the marked label, 1 elsewhere.
ProblemSpec grover_problem(int qubits, std::size_t marked);

/// Integer costs drawn uniformly from [0, n^3] with at least one zero.
ProblemSpec random_int_problem(int qubits, std::uint64_t seed);

/// H(s) = (1 - s)(I - |α⟩⟨α|) + s diag(f) on the canonical costs, applied
/// matrix-free in O(N).
class Hamiltonian {
 public:
  Hamiltonian(const ProblemSpec& problem, double s);

  double s() const noexcept { return s_; }
  const ProblemSpec& problem() const noexcept { return *problem_; }

  /// out = H(s) v. `out` must not alias `v`.
  template <typename T>
  void apply(std::span<const T> v, std::span<T> out) const {
    const auto f = problem_->costs();
    if (v.size() != f.size() || out.size() != f.size()) {
      throw LengthMismatch("hamiltonian applied to vector of wrong length");
    }
    T sum{};
    for (const T& x : v) sum += x;
    const T mean = sum / static_cast<double>(f.size());
    const double drive = 1.0 - s_;
    for (std::size_t i = 0; i < f.size(); ++i) {
      out[i] = drive * (v[i] - mean) + s_ * f[i] * v[i];
    }
  }

  template <typename T>
  std::vector<T> apply(std::span<const T> v) const {
    std::vector<T> out(v.size());
    apply<T>(v, std::span<T>(out));
    return out;
  }

 private:
  const ProblemSpec* problem_;
  double s_;
};

Amplitudes apply_hamiltonian(const Hamiltonian& h, std::span<const Complex> v);

/// Dense canonical H(s); entry (i,j) = (1-s)(δij - 1/N) + s f(i) δij.
/// Throws OracleTooLarge above `ceiling`.
Eigen::MatrixXd dense_hamiltonian(const Hamiltonian& h, std::size_t ceiling = kDefaultOracleCeiling);

/// Upper bound on ||H(s)||_2 over s in [0, 1].
double hamiltonian_norm_bound(const ProblemSpec& problem);

enum class ScheduleKind { Linear, Tabulated, Interpolation };

struct ScheduleSample {
  double s;      // normalized path position
  double rate;   // ds/dt
  double scale;  // overall energy scale multiplying H(s)
};

/// Maps physical time in [0, T] to the path position s, with s(0) = 0,
/// s(T) = 1 and s strictly increasing.
class Schedule {
 public:
  using PathFunction = std::function<double(double)>;

  static Schedule linear(double runtime);
  /// (time, s) knots; first must be (0, 0), last (T, 1). Monotone cubic
  /// (PCHIP) interpolation for four or more knots, piecewise linear below.
  static Schedule tabulated(std::vector<std::pair<double, double>> knots);
  /// H(t) = f(t) H0 + g(t) H1 reduced to s = g/(f+g) with scale f+g.
  /// Rejected unless the sampled s is strictly increasing.
  static Schedule interpolation(double runtime, PathFunction f_path, PathFunction g_path);

  ScheduleKind kind() const noexcept { return kind_; }
  double runtime() const noexcept { return runtime_; }

  /// Throws TimeOutOfRange outside [0, T].
  ScheduleSample at(double time) const;
  /// Inverse map s -> time.
  double time_at(double s) const;

 private:
  Schedule(ScheduleKind kind, double runtime) : kind_(kind), runtime_(runtime) {}

  double position(double time) const;

  ScheduleKind kind_;
  double runtime_;
  std::vector<double> knot_times_;
  std::vector<double> knot_values_;
  std::function<double(double)> pchip_value_;
  std::function<double(double)> pchip_slope_;
  PathFunction f_path_;
  PathFunction g_path_;
};

ScheduleSample eval_schedule(const Schedule& schedule, double time);

}  // namespace adiabatic
