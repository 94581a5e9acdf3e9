#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sadre {

// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Standard normal quantile: Acklam's rational initial guess refined with two
// Halley steps against normal_cdf. Absolute error well below 1e-12 for
// p in (1e-300, 1-1e-16).
double normal_quantile(double p);

// Hermite smoothstep on [edge0, edge1]; clamps outside. Degenerate edges
// (edge1 <= edge0) map everything at or below edge0 to 0 and above to 1.
inline double smoothstep(double edge0, double edge1, double x) {
  if (edge1 <= edge0) return x > edge0 ? 1.0 : 0.0;
  double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

// Percentile with linear interpolation between order statistics
// (index = pct/100 * (n-1)). Input must be sorted ascending.
inline double percentile_sorted(const std::vector<double>& sorted, double pct) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty set");
  if (sorted.size() == 1) return sorted[0];
  double idx = pct / 100.0 * static_cast<double>(sorted.size() - 1);
  idx = std::clamp(idx, 0.0, static_cast<double>(sorted.size() - 1));
  size_t lo = static_cast<size_t>(idx);
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = idx - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace sadre
