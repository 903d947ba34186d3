#include "adiabatic/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "adiabatic/errors.hpp"

namespace adiabatic {

Distribution::Distribution(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) {
    throw ConfigError("distribution must have at least one entry");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!(p_[i] >= 0.0) || !std::isfinite(p_[i])) {
      throw ConfigError(fmt::format("distribution entry {} is {} (must be finite and >= 0)", i, p_[i]));
    }
    total += p_[i];
  }
  if (std::abs(total - 1.0) > kDistributionSumTolerance) {
    throw NormError(fmt::format("distribution sums to {:.17g}, expected 1", total));
  }
}

Distribution Distribution::uniform(std::size_t n) {
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t index) {
  std::vector<double> p(n, 0.0);
  p.at(index) = 1.0;
  return Distribution(std::move(p));
}

PartialSumCurve::PartialSumCurve(std::vector<double> cumulative) : cumulative_(std::move(cumulative)) {}

const char* to_string(Relation relation) noexcept {
  switch (relation) {
    case Relation::Majorized: return "majorized";
    case Relation::Equal: return "equal-within-tol";
    case Relation::NotMajorized: return "not-majorized";
  }
  return "unknown";
}

Distribution distribution_from_state(std::span<const Complex> amplitudes, double norm_tolerance) {
  std::vector<double> p(amplitudes.size());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    p[i] = std::norm(amplitudes[i]);
    norm2 += p[i];
  }
  const double norm = std::sqrt(norm2);
  if (!(std::abs(norm - 1.0) <= norm_tolerance)) {
    throw NormError(fmt::format("state norm {:.17g} deviates from 1 by more than {}", norm, norm_tolerance));
  }
  for (double& x : p) x /= norm2;
  return Distribution(std::move(p));
}

PartialSumCurve partial_sums(const Distribution& d) {
  const auto p = d.values();
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return p[i] > p[j]; });

  std::vector<double> cumulative(p.size());
  double running = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    running += p[order[k]];
    cumulative[k] = running;
  }
  return PartialSumCurve(std::move(cumulative));
}

namespace {

struct GapScan {
  double deficit;
  std::size_t argmin;  // 0-based
};

GapScan scan_gaps(const PartialSumCurve& x, const PartialSumCurve& y) {
  if (x.size() != y.size()) {
    throw LengthMismatch(fmt::format("cannot compare distributions of length {} and {}", x.size(), y.size()));
  }
  GapScan scan{y[0] - x[0], 0};
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double gap = y[k] - x[k];
    if (gap < scan.deficit) scan = {gap, k};
  }
  return scan;
}

}  // namespace

MajorizationVerdict check_majorization(const PartialSumCurve& x, const PartialSumCurve& y, double tol) {
  const GapScan scan = scan_gaps(x, y);
  MajorizationVerdict verdict;
  verdict.deficit = scan.deficit;
  if (scan.deficit < -tol) {
    verdict.relation = Relation::NotMajorized;
    verdict.witness_k = scan.argmin + 1;
    return verdict;
  }
  double widest = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) widest = std::max(widest, std::abs(y[k] - x[k]));
  verdict.relation = (widest > 0.0 && widest <= tol) ? Relation::Equal : Relation::Majorized;
  return verdict;
}

MajorizationVerdict check_majorization(const Distribution& x, const Distribution& y, double tol) {
  if (x.size() != y.size()) {
    throw LengthMismatch(fmt::format("cannot compare distributions of length {} and {}", x.size(), y.size()));
  }
  return check_majorization(partial_sums(x), partial_sums(y), tol);
}

double lorenz_deficit(const PartialSumCurve& x, const PartialSumCurve& y) { return scan_gaps(x, y).deficit; }

double lorenz_deficit(const Distribution& x, const Distribution& y) {
  if (x.size() != y.size()) {
    throw LengthMismatch(fmt::format("cannot compare distributions of length {} and {}", x.size(), y.size()));
  }
  return lorenz_deficit(partial_sums(x), partial_sums(y));
}

}  // namespace adiabatic
