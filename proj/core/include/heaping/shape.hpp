#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "heaping/model.hpp"
#include "heaping/sampling.hpp"
#include "heaping/stats.hpp"

namespace heaping {

enum class Metric { turnout, result };

std::string_view to_string(Metric metric);

/// given/registered or leader/cast; absent when the denominator is zero.
std::optional<CountRatio> metric_ratio(const StationCounts& counts, Metric metric);

struct HistogramOptions {
  Percent bin_width = Percent::from_ticks(1000);  // 0.1%
  /// Add U(-0.5, 0.5) to each numerator before dividing.
  bool jitter = false;
  std::uint64_t jitter_seed = 0;
  /// Leave stations at exactly 100% out of the bins (their mass is kept in
  /// suppressed_weight).
  bool suppress_full = true;

  /// bin_width must be a positive, even number of ticks dividing 1%.
  void validate() const;
};

/// Registered-voter mass per percentage bin. Bin i is centred at
/// i * bin_width and covers [center - w/2, center + w/2); with w = 0.1 the
/// 70.0 bin holds turnouts in [69.95, 70.05).
struct WeightedHistogram {
  Metric metric = Metric::turnout;
  Percent bin_width = Percent::from_ticks(1000);
  std::vector<double> weights;
  double suppressed_weight = 0.0;

  std::size_t size() const { return weights.size(); }
  double center(std::size_t bin) const {
    return static_cast<double>(bin) * bin_width.to_double();
  }
  double total() const;
};

std::size_t bin_count(Percent bin_width);
std::size_t bin_index(const CountRatio& value, Percent bin_width);

WeightedHistogram build_histogram(const ElectionDataset& dataset, Metric metric,
                                  const HistogramOptions& options = {});

/// Histogram of arbitrary counts (e.g. one simulated election). `stream_slot`
/// selects the jitter stream: 0 for the observed data, iteration + 1 for
/// Monte Carlo elections.
void accumulate_histogram(std::span<const StationCounts> counts, Metric metric,
                          const HistogramOptions& options, std::uint32_t stream_slot,
                          std::span<std::int64_t> weights, std::int64_t& suppressed);

struct Envelope {
  PercentileLevels levels;
  std::vector<double> low;
  std::vector<double> high;
  std::vector<double> mean;
};

/// Per-iteration simulated histograms for one metric, row-major
/// [iteration][bin].
class HistogramEnsemble {
 public:
  HistogramEnsemble(Metric metric, Percent bin_width, std::size_t iterations);

  Metric metric() const { return metric_; }
  Percent bin_width() const { return bin_width_; }
  std::size_t iterations() const { return iterations_; }
  std::size_t bins() const { return bins_; }

  std::span<std::int64_t> row(std::size_t iteration);
  std::span<const std::int64_t> row(std::size_t iteration) const;
  WeightedHistogram histogram(std::size_t iteration) const;

  WeightedHistogram mean() const;
  Envelope envelope(const PercentileLevels& levels) const;

 private:
  Metric metric_;
  Percent bin_width_;
  std::size_t iterations_;
  std::size_t bins_;
  std::vector<std::int64_t> weights_;
};

/// Simulated histograms for each requested metric, drawn from the same
/// Monte Carlo elections that run_null sees for (model, master_seed).
std::vector<HistogramEnsemble> simulate_histograms(const ElectionDataset& dataset,
                                                   std::span<const Metric> metrics,
                                                   const NullModel& model, std::uint64_t iterations,
                                                   std::uint64_t master_seed,
                                                   const HistogramOptions& options = {},
                                                   unsigned workers = 0);

Envelope histogram_envelope(const ElectionDataset& dataset, Metric metric, const NullModel& model,
                            std::uint64_t iterations, const PercentileLevels& levels,
                            std::uint64_t master_seed, const HistogramOptions& options = {},
                            unsigned workers = 0);

/// Per-bin arithmetic mean. All inputs must share metric and grid.
WeightedHistogram average_histograms(std::span<const WeightedHistogram> histograms);

struct PeakShape {
  std::vector<double> offsets;      // -0.5 ... +0.5 in bin steps
  std::vector<double> mean_excess;  // empirical minus MC mean, averaged
  std::size_t intervals = 0;
};

/// Averages (empirical - mc_mean) over the 1%-long windows centred on the
/// integers 1..99 of every histogram pair (two metrics give 198 windows).
PeakShape peak_shape(std::span<const WeightedHistogram> empirical,
                     std::span<const WeightedHistogram> mc_mean);

}  // namespace heaping
