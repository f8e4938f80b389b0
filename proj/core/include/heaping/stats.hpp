#pragma once

#include <span>
#include <vector>

namespace heaping {

/// Lower/upper percentile levels as fractions, default the 99% box.
struct PercentileLevels {
  double low = 0.005;
  double high = 0.995;

  void validate() const;
};

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> values);

/// Percentile of already-sorted values with the midpoint (Hazen) rule:
/// position n*p + 0.5 in 1-based order statistics, clamped to [x(1), x(n)],
/// linear in between. With n = 100 the 0.5% and 99.5% levels are exactly
/// the minimum and the maximum.
double percentile_sorted(std::span<const double> sorted, double level);

}  // namespace heaping
