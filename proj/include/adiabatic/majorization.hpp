#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace adiabatic {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Partial-sum comparison tolerance used when callers do not pass one.
inline constexpr double kDefaultMajorizationTolerance = 1e-9;

/// Tolerance on the total mass of a Distribution.
inline constexpr double kDistributionSumTolerance = 1e-10;

/// Probability vector over N outcomes. Validated once on construction
/// (non-negative entries, total 1 within kDistributionSumTolerance).
class Distribution {
 public:
  explicit Distribution(std::vector<double> p);

  static Distribution uniform(std::size_t n);
  static Distribution point_mass(std::size_t n, std::size_t index);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

/// Cumulative sums of a distribution sorted in decreasing order (its Lorenz
/// curve). Entry k-1 holds the sum of the k largest probabilities.
class PartialSumCurve {
 public:
  explicit PartialSumCurve(std::vector<double> cumulative);

  std::size_t size() const noexcept { return cumulative_.size(); }
  double operator[](std::size_t i) const { return cumulative_[i]; }
  std::span<const double> values() const noexcept { return cumulative_; }

 private:
  std::vector<double> cumulative_;
};

enum class Relation {
  Majorized,     // x ≺ y: every partial-sum gap >= -tol
  Equal,         // curves differ, but every gap is within tol in absolute value
  NotMajorized,  // some gap below -tol
};

const char* to_string(Relation relation) noexcept;

struct MajorizationVerdict {
  Relation relation = Relation::Majorized;
  /// 1-based k of the most negative gap; set only for NotMajorized.
  std::optional<std::size_t> witness_k;
  /// min_k (cumulative_y[k] - cumulative_x[k]).
  double deficit = 0.0;
};

/// |amplitude_i|^2, divided by the squared norm so the result is a valid
/// Distribution. Throws NormError when | ||amplitudes|| - 1 | > norm_tolerance.
Distribution distribution_from_state(std::span<const Complex> amplitudes,
                                     double norm_tolerance = 1e-8);

/// Descending sort with ties kept in ascending original index, then cumulative sums.
PartialSumCurve partial_sums(const Distribution& d);

/// Decides x ≺ y. Throws LengthMismatch on unequal sizes.
MajorizationVerdict check_majorization(const Distribution& x, const Distribution& y,
                                       double tol = kDefaultMajorizationTolerance);
MajorizationVerdict check_majorization(const PartialSumCurve& x, const PartialSumCurve& y,
                                       double tol = kDefaultMajorizationTolerance);

/// min_k (cumulative_y[k] - cumulative_x[k]); non-negative iff x ≺ y exactly.
double lorenz_deficit(const Distribution& x, const Distribution& y);
double lorenz_deficit(const PartialSumCurve& x, const PartialSumCurve& y);

}  // namespace adiabatic
