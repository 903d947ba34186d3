#include "adiabatic/ground.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace adiabatic {

namespace {

void require_interior(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError(fmt::format("{} requires 0 < s < 1, got s = {}", what, s));
}

void require_unit_interval(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError(fmt::format("path position s = {} outside [0, 1]", s));
}

struct SecularValue {
  double residual;
  double slope;
};

SecularValue secular_with_slope(std::span<const double> f, double s, double t) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double fi : f) {
    const double w = 1.0 / (t + s * fi);
    sum += w;
    sum_sq += w * w;
  }
  const double scale = (1.0 - s) / static_cast<double>(f.size());
  return {scale * sum - 1.0, -scale * sum_sq};
}

// r_i = t / (t + s f_i): amplitude ratios relative to the largest component.
std::vector<double> amplitude_ratios(std::span<const double> f, double s, double t) {
  std::vector<double> r(f.size());
  if (t == 0.0) {
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = (f[i] == 0.0) ? 1.0 : 0.0;
    return r;
  }
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = t / (t + s * f[i]);
  return r;
}

}  // namespace

double reported_eigenvalue(const ProblemSpec& problem, const GroundStateSolution& gs) {
  return gs.lambda + gs.s * problem.shift();
}

double secular_residual(const ProblemSpec& problem, double s, double t) {
  const auto f = problem.costs();
  // f is ascending with f[0] = 0, so the smallest denominator is t + s f[0].
  for (double fi : f) {
    if (!(t + s * fi > 0.0)) {
      throw DomainError(fmt::format("secular denominator t + s f = {} is not positive", t + s * fi));
    }
  }
  return secular_with_slope(f, s, t).residual;
}

double solve_t(const ProblemSpec& problem, double s) {
  require_unit_interval(s);
  if (s == 0.0) return 1.0;
  if (s == 1.0) return 0.0;

  const auto f = problem.costs();
  double lo = std::numeric_limits<double>::min();
  double hi = 1.0;
  if (!(secular_with_slope(f, s, lo).residual > 0.0) || !(secular_with_slope(f, s, hi).residual < 0.0)) {
    throw ConvergenceFailure(fmt::format("secular equation does not change sign on (0, 1] at s = {}", s));
  }

  // Bisection (geometric while the bracket spans orders of magnitude) to a
  // relative width of 1e-12.
  for (int iter = 0; iter < 4000 && hi - lo > 1e-12 * hi; ++iter) {
    const double mid = (hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    (secular_with_slope(f, s, mid).residual > 0.0 ? lo : hi) = mid;
  }

  // Newton polish. φ is convex and decreasing, so iterates from the left end
  // approach the root monotonically; anything leaving the bracket is bisected.
  double t = lo;
  for (int iter = 0; iter < 100; ++iter) {
    const SecularValue v = secular_with_slope(f, s, t);
    if (std::abs(v.residual) <= 1e-13 || hi - lo <= 1e-15 * std::max(hi, 1e-300)) break;
    if (v.residual > 0.0) lo = t; else hi = t;
    double next = t - v.residual / v.slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  return t;
}

GroundStateSolution ground_state(const ProblemSpec& problem, double s) {
  GroundStateSolution gs;
  gs.s = s;
  gs.t = solve_t(problem, s);
  gs.lambda = 1.0 - s - gs.t;

  gs.a = amplitude_ratios(problem.costs(), s, gs.t);
  double norm2 = 0.0;
  for (double r : gs.a) norm2 += r * r;
  const double inv_norm = 1.0 / std::sqrt(norm2);
  for (double& x : gs.a) x *= inv_norm;

  gs.A.resize(gs.a.size());
  double running = 0.0;
  for (std::size_t i = 0; i < gs.a.size(); ++i) {
    running += gs.a[i] * gs.a[i];
    gs.A[i] = running;
  }
  return gs;
}

GroundDerivatives ground_derivatives(const ProblemSpec& problem, double s) {
  require_interior(s, "ground_derivatives");
  const auto f = problem.costs();
  const std::size_t n = f.size();
  const GroundStateSolution gs = ground_state(problem, s);
  const double t = gs.t;
  const std::vector<double> r = amplitude_ratios(f, s, t);

  // Implicit differentiation of φ(t(s), s) = 1, with every sum multiplied
  // through by powers of t so the terms stay O(1) as t -> 0.
  double sum_r = 0.0;
  double sum_r2 = 0.0;
  double sum_fr2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_r += r[i];
    sum_r2 += r[i] * r[i];
    sum_fr2 += f[i] * r[i] * r[i];
  }
  GroundDerivatives d;
  d.dt_ds = -(t * sum_r + (1.0 - s) * sum_fr2) / ((1.0 - s) * sum_r2);
  d.dratio_ds = (t - s * d.dt_ds) / (t * t);

  // dA_k/ds = 2 d(s/t)/ds · Σ_{i<=k} Σ_{j>k} a_i² a_j² (g_j - g_i),
  // g_i = f_i / (1 + (s/t) f_i) = f_i r_i. The double sum factors into
  // A_k · Σ_{j>k} a_j² g_j - (1 - A_k) · Σ_{i<=k} a_i² g_i.
  std::vector<double> tail_mass(n + 1, 0.0);
  std::vector<double> tail_weighted(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const double p = gs.a[i] * gs.a[i];
    tail_mass[i] = tail_mass[i + 1] + p;
    tail_weighted[i] = tail_weighted[i + 1] + p * f[i] * r[i];
  }
  d.dA_ds.resize(n);
  double head_weighted = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    head_weighted += gs.a[k] * gs.a[k] * f[k] * r[k];
    const double cross = gs.A[k] * tail_weighted[k + 1] - tail_mass[k + 1] * head_weighted;
    d.dA_ds[k] = 2.0 * d.dratio_ds * cross;
  }
  return d;
}

std::size_t crossing_index(const ProblemSpec& problem, double s, double ds) {
  if (!(s > 0.0 && ds > 0.0 && s + ds <= 1.0)) {
    throw DomainError(fmt::format("crossing_index requires 0 < s, ds > 0, s + ds <= 1 (s = {}, ds = {})", s, ds));
  }
  constexpr double kSlack = 1e-12;
  const auto before = ground_state(problem, s).a;
  const auto after = ground_state(problem, s + ds).a;

  std::size_t i0 = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (after[i] >= before[i] - kSlack) i0 = i + 1;
  }
  for (std::size_t i = 0; i < i0; ++i) {
    if (after[i] < before[i] - kSlack) {
      throw SignPatternViolation(fmt::format(
          "amplitude {} shrinks ({:.17g} -> {:.17g}) below crossing index {} at s = {}, ds = {}", i + 1,
          before[i], after[i], i0, s, ds));
    }
  }
  return i0;
}

SpectrumPair dense_spectrum_oracle(const ProblemSpec& problem, double s, const OracleOptions& options) {
  const Hamiltonian h(problem, s);
  const Eigen::MatrixXd m = dense_hamiltonian(h, options.ceiling);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw EigensolveFailure(fmt::format("dense eigensolver failed at s = {}", s));
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  SpectrumPair out;
  out.v0 = vectors.col(0);
  if (out.v0.sum() < 0.0) out.v0 = -out.v0;
  out.v1 = vectors.col(1);

  for (int j = 0; j < 2; ++j) {
    const double residual = (m * vectors.col(j) - values(j) * vectors.col(j)).norm();
    if (!(residual <= options.residual_tolerance)) {
      throw EigensolveFailure(fmt::format("eigenpair {} residual {} exceeds {} at s = {}", j, residual,
                                          options.residual_tolerance, s));
    }
  }

  const double degeneracy_tol = 1e-10 * std::max(1.0, std::abs(values(1)));
  Eigen::Index width = 1;
  while (1 + width < values.size() && std::abs(values(1 + width) - values(1)) <= degeneracy_tol) ++width;
  out.excited_space = vectors.middleCols(1, width);

  out.E0 = values(0) + s * problem.shift();
  out.E1 = values(1) + s * problem.shift();
  return out;
}

SpectralReport spectral_report(const ProblemSpec& problem, const Schedule& schedule, std::span<const double> grid,
                               const OracleOptions& options) {
  if (grid.empty()) throw ConfigError("spectral_report needs a non-empty grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    require_unit_interval(grid[j]);
    if (j > 0 && !(grid[j] >= grid[j - 1])) throw ConfigError("spectral_report grid must be sorted");
  }

  const auto f = problem.costs();
  const Eigen::Map<const Eigen::VectorXd> costs(f.data(), static_cast<Eigen::Index>(f.size()));

  SpectralReport report;
  report.s_grid.assign(grid.begin(), grid.end());
  report.g_min = std::numeric_limits<double>::infinity();
  for (double s : grid) {
    const SpectrumPair pair = dense_spectrum_oracle(problem, s, options);
    report.E0.push_back(pair.E0);
    report.E1.push_back(pair.E1);
    const double gap = pair.E1 - pair.E0;
    if (gap < report.g_min) {
      report.g_min = gap;
      report.s_at_g_min = s;
    }

    // ⟨E1| dH/dt |E0⟩ = scale · ds/dt · ⟨E1| H1 - H0 |E0⟩; the d(scale)/dt
    // term is proportional to H(s) and has no off-diagonal element.
    const ScheduleSample sample = schedule.at(schedule.time_at(s));
    const Eigen::VectorXd drive =
        costs.cwiseProduct(pair.v0) - (pair.v0 - Eigen::VectorXd::Constant(pair.v0.size(), pair.v0.mean()));
    const double element = (pair.excited_space.transpose() * drive).norm();
    report.D_max = std::max(report.D_max, std::abs(sample.scale * sample.rate) * element);
  }
  report.epsilon_bound =
      report.g_min > 0.0 ? report.D_max / (report.g_min * report.g_min) : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace adiabatic
