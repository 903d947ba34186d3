#pragma once

// Test-only oracles and generators. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testsupport {

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) total += (x = draw(rng));
  for (double& x : p) x /= total;
  // Renormalize once more so the sum is 1 to rounding.
  total = 0.0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return p;
}

/// Largest sum of any k entries, by enumerating all subsets (n <= 16).
inline double max_subset_sum(const std::vector<double>& p, std::size_t k) {
  const std::size_t n = p.size();
  double best = -1.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sum += p[i];
    }
    best = std::max(best, sum);
  }
  return best;
}

/// x ≺ y decided through subset maxima.
inline bool majorized_by_enumeration(const std::vector<double>& x, const std::vector<double>& y, double tol) {
  for (std::size_t k = 1; k <= x.size(); ++k) {
    if (max_subset_sum(y, k) < max_subset_sum(x, k) - tol) return false;
  }
  return true;
}

inline double central_difference(const std::function<double(double)>& g, double x, double h) {
  return (g(x + h) - g(x - h)) / (2.0 * h);
}

/// Integer costs in [0, top] with a zero at a random label.
inline std::vector<double> random_int_costs(std::mt19937_64& rng, int qubits, int top) {
  const std::size_t n = std::size_t{1} << qubits;
  std::uniform_int_distribution<int> draw(0, top);
  std::vector<double> f(n);
  for (double& x : f) x = draw(rng);
  f[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 0.0;
  return f;
}

}  // namespace testsupport
