#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "adiabatic/ground.hpp"
#include "adiabatic/majorization.hpp"
#include "adiabatic/model.hpp"

namespace adiabatic {

struct EvolutionState {
  double time = 0.0;
  double s = 0.0;
  Amplitudes b;
  double norm = 1.0;
};

/// States sampled on an output grid of path positions, with the overlap
/// |⟨ψ(s)|ψ'(s)⟩| against the instantaneous ground state and the distance
/// δ = ||ψ(s) - e^{iθ}ψ'(s)|| after gauge fixing.
struct Trajectory {
  std::vector<EvolutionState> states;
  std::vector<double> fidelity;
  std::vector<double> delta;
  /// Largest | ||b|| - 1 | seen at any integration step.
  double max_norm_drift = 0.0;
  double step = 0.0;
  std::size_t step_count = 0;
};

struct EvolutionOptions {
  double dt = 0.01;
  /// Strictly increasing s values in [0, 1].
  std::vector<double> output_grid;
  /// Hard limit on | ||b|| - 1 | at every step.
  double norm_tolerance = 1e-8;
  bool renormalize = false;
  /// Largest allowed dt · ||H||.
  double stability_limit = 0.1;
};

/// Right-hand side of the Schrödinger equation: out = H(time) in.
using Generator = std::function<void(double time, std::span<const Complex> in, std::span<Complex> out)>;

/// Classical fourth-order Runge-Kutta for i db/dτ = H(τ) b. `dt` may be
/// negative to integrate backwards in time.
class SchrodingerStepper {
 public:
  SchrodingerStepper(Generator generator, std::size_t dimension);

  void step(double time, double dt, Amplitudes& b);

 private:
  void derivative(double time, std::span<const Complex> in, std::span<Complex> out);

  Generator generator_;
  Amplitudes k1_, k2_, k3_, k4_, scratch_;
};

double state_norm(std::span<const Complex> b);

/// Integrates from the uniform superposition (ground state of H0) over the
/// schedule, recording the step whose s is nearest to each output grid value.
/// Throws NormDriftExceeded and StepTooLarge.
Trajectory evolve(const ProblemSpec& problem, const Schedule& schedule, const EvolutionOptions& options);

struct GaugedOverlap {
  double overlap = 0.0;
  double delta = 0.0;
  Amplitudes b_gauged;
};

/// Rotates b by the global phase making ⟨ψ(s)|ψ'(s)⟩ real and non-negative.
GaugedOverlap gauge_fixed_overlap(const EvolutionState& state, const GroundStateSolution& gs);

struct ConvergencePoint {
  double dt = 0.0;
  double error = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;  // all but the reference run
  double order = 0.0;                    // least-squares slope of log error vs log dt
};

/// Self-convergence against the finest step in `dt_list` (strictly
/// decreasing, at least three entries). Throws NonConvergent when the
/// contract is violated or the fitted order is below 2.
ConvergenceResult convergence_probe(const ProblemSpec& problem, const Schedule& schedule,
                                    std::span<const double> dt_list);

/// Σ_{i<=k} |b_i|² in canonical label order, k = 1..N.
std::vector<double> cumulative_probability(std::span<const Complex> b);

}  // namespace adiabatic
