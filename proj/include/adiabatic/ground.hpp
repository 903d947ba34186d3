#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adiabatic/model.hpp"

namespace adiabatic {

/// Instantaneous ground state of the canonical H(s).
///
/// With t = 1 - s - λ the amplitudes obey (t + s f(i)) a_i = const, so
/// a_i ∝ 1/(t + s f(i)); t is the unique root in (0, 1] of
///
///     (1 - s)/N · Σ_i 1/(t + s f(i)) = 1.
///
/// Amplitudes are positive and descending (canonical costs ascend).
struct GroundStateSolution {
  double s = 0.0;
  double t = 1.0;
  /// Canonical eigenvalue 1 - s - t; add s·shift for the caller's H(s).
  double lambda = 0.0;
  std::vector<double> a;
  /// A[k-1] = Σ_{i<=k} a_i².
  std::vector<double> A;
};

/// Ground eigenvalue of the caller's (unshifted) H(s).
double reported_eigenvalue(const ProblemSpec& problem, const GroundStateSolution& gs);

/// φ(t) - 1 with φ(t) = ((1-s)/N) Σ 1/(t + s f(i)). Strictly decreasing in t.
/// Throws DomainError when some denominator is not positive.
double secular_residual(const ProblemSpec& problem, double s, double t);

/// Root t(s) of the secular equation; t(0) = 1 and t(1) = 0 exactly.
/// Throws ConvergenceFailure if the bracket does not change sign.
double solve_t(const ProblemSpec& problem, double s);

GroundStateSolution ground_state(const ProblemSpec& problem, double s);

struct GroundDerivatives {
  double dt_ds = 0.0;
  /// d(s/t)/ds.
  double dratio_ds = 0.0;
  /// dA_ds[k-1] = dA_k/ds.
  std::vector<double> dA_ds;
};

/// Analytic derivatives by implicit differentiation of the secular equation.
/// Requires 0 < s < 1.
GroundDerivatives ground_derivatives(const ProblemSpec& problem, double s);

/// Largest 1-based i with a_i(s + ds) >= a_i(s) (0 if none). Checks that the
/// growing components form a prefix; throws SignPatternViolation otherwise.
std::size_t crossing_index(const ProblemSpec& problem, double s, double ds);

struct OracleOptions {
  std::size_t ceiling = kDefaultOracleCeiling;
  double residual_tolerance = 1e-9;
};

/// Two lowest eigenpairs of the dense H(s), eigenvalues reported for the
/// caller's unshifted costs. v0 is phase-fixed so Σ v0_i > 0.
struct SpectrumPair {
  double E0 = 0.0;
  double E1 = 0.0;
  Eigen::VectorXd v0;
  Eigen::VectorXd v1;
  /// Orthonormal basis of the full E1 eigenspace (columns).
  Eigen::MatrixXd excited_space;
};

SpectrumPair dense_spectrum_oracle(const ProblemSpec& problem, double s, const OracleOptions& options = {});

struct SpectralReport {
  std::vector<double> s_grid;
  std::vector<double> E0;
  std::vector<double> E1;
  double g_min = 0.0;
  double s_at_g_min = 0.0;
  double D_max = 0.0;
  double epsilon_bound = 0.0;
};

/// Gap and evolving-rate quantities of the adiabatic condition on a grid of
/// path positions. The matrix element uses the whole E1 eigenspace, so it is
/// independent of the basis chosen inside a degenerate level.
SpectralReport spectral_report(const ProblemSpec& problem, const Schedule& schedule,
                               std::span<const double> grid, const OracleOptions& options = {});

}  // namespace adiabatic
