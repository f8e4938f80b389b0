#include "heaping/stats.hpp"

#include <cmath>

#include "heaping/errors.hpp"

namespace heaping {

void PercentileLevels::validate() const {
  if (!(low >= 0.0 && low < high && high <= 1.0)) {
    throw ParameterError("percentile levels must satisfy 0 <= low < high <= 1");
  }
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double percentile_sorted(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw ParameterError("percentile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  const double position = n * level + 0.5;
  if (position <= 1.0) return sorted.front();
  if (position >= n) return sorted.back();
  const double lower = std::floor(position);
  const auto i = static_cast<std::size_t>(lower) - 1;
  const double frac = position - lower;
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace heaping
