#include "heaping/shape.hpp"

#include <algorithm>
#include <cmath>

#include "heaping/errors.hpp"
#include "heaping/parallel.hpp"
#include "heaping/rng.hpp"
#include "heaping/simulation.hpp"

namespace heaping {

namespace {

constexpr std::int64_t kFullScale = 100 * Percent::kTicksPerPercent;

void require_same_grid(const WeightedHistogram& a, const WeightedHistogram& b) {
  if (a.metric != b.metric || a.bin_width != b.bin_width || a.size() != b.size()) {
    throw ParameterError("histograms are on different grids");
  }
}

}  // namespace

std::string_view to_string(Metric metric) {
  return metric == Metric::turnout ? "turnout" : "result";
}

std::optional<CountRatio> metric_ratio(const StationCounts& c, Metric metric) {
  if (metric == Metric::turnout) {
    if (c.registered <= 0) return std::nullopt;
    return CountRatio{c.given, c.registered};
  }
  if (c.cast <= 0) return std::nullopt;
  return CountRatio{c.leader, c.cast};
}

void HistogramOptions::validate() const {
  const auto w = bin_width.ticks();
  if (w <= 0 || w % 2 != 0 || Percent::kTicksPerPercent % w != 0) {
    throw ParameterError("bin width must divide 1% evenly");
  }
}

double WeightedHistogram::total() const {
  double t = 0.0;
  for (double w : weights) t += w;
  return t;
}

std::size_t bin_count(Percent bin_width) {
  return static_cast<std::size_t>(kFullScale / bin_width.ticks()) + 1;
}

std::size_t bin_index(const CountRatio& value, Percent bin_width) {
  const std::int64_t w = bin_width.ticks();
  const std::int64_t den = value.denominator;
  const std::int64_t scaled = value.scaled_ticks() + (w / 2) * den;
  const std::int64_t idx = scaled < 0 ? 0 : scaled / (w * den);
  return std::min(static_cast<std::size_t>(idx), bin_count(bin_width) - 1);
}

void accumulate_histogram(std::span<const StationCounts> counts, Metric metric,
                          const HistogramOptions& options, std::uint32_t stream_slot,
                          std::span<std::int64_t> weights, std::int64_t& suppressed) {
  const std::size_t bins = bin_count(options.bin_width);
  if (weights.size() != bins) throw ParameterError("histogram buffer has the wrong bin count");
  const double w = static_cast<double>(options.bin_width.ticks());
  const StreamTag tag = metric == Metric::turnout ? StreamTag::jitter_turnout : StreamTag::jitter_result;

  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto ratio = metric_ratio(counts[i], metric);
    if (!ratio) continue;
    const Count mass = counts[i].registered;
    if (options.suppress_full && ratio->numerator == ratio->denominator) {
      suppressed += mass;
      continue;
    }
    std::size_t idx;
    if (options.jitter) {
      RandomStream stream(options.jitter_seed, tag, static_cast<std::uint32_t>(i), stream_slot);
      const double numerator = static_cast<double>(ratio->numerator) + stream.uniform() - 0.5;
      const double ticks = numerator * static_cast<double>(kFullScale) /
                           static_cast<double>(ratio->denominator);
      const double pos = std::floor((ticks + w / 2.0) / w);
      idx = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), bins - 1);
    } else {
      idx = bin_index(*ratio, options.bin_width);
    }
    weights[idx] += mass;
  }
}

WeightedHistogram build_histogram(const ElectionDataset& dataset, Metric metric,
                                  const HistogramOptions& options) {
  options.validate();
  std::vector<StationCounts> counts;
  counts.reserve(dataset.size());
  for (const auto& s : dataset.stations()) counts.push_back(s.counts);

  std::vector<std::int64_t> weights(bin_count(options.bin_width), 0);
  std::int64_t suppressed = 0;
  accumulate_histogram(counts, metric, options, 0, weights, suppressed);

  WeightedHistogram h;
  h.metric = metric;
  h.bin_width = options.bin_width;
  h.weights.assign(weights.begin(), weights.end());
  h.suppressed_weight = static_cast<double>(suppressed);
  return h;
}

HistogramEnsemble::HistogramEnsemble(Metric metric, Percent bin_width, std::size_t iterations)
    : metric_(metric),
      bin_width_(bin_width),
      iterations_(iterations),
      bins_(bin_count(bin_width)),
      weights_(iterations * bins_, 0) {}

std::span<std::int64_t> HistogramEnsemble::row(std::size_t iteration) {
  return std::span(weights_).subspan(iteration * bins_, bins_);
}

std::span<const std::int64_t> HistogramEnsemble::row(std::size_t iteration) const {
  return std::span(weights_).subspan(iteration * bins_, bins_);
}

WeightedHistogram HistogramEnsemble::histogram(std::size_t iteration) const {
  WeightedHistogram h;
  h.metric = metric_;
  h.bin_width = bin_width_;
  const auto r = row(iteration);
  h.weights.assign(r.begin(), r.end());
  return h;
}

WeightedHistogram HistogramEnsemble::mean() const {
  WeightedHistogram h;
  h.metric = metric_;
  h.bin_width = bin_width_;
  std::vector<std::int64_t> sums(bins_, 0);
  for (std::size_t it = 0; it < iterations_; ++it) {
    const auto r = row(it);
    for (std::size_t b = 0; b < bins_; ++b) sums[b] += r[b];
  }
  h.weights.resize(bins_);
  for (std::size_t b = 0; b < bins_; ++b) {
    h.weights[b] = iterations_ ? static_cast<double>(sums[b]) / static_cast<double>(iterations_) : 0.0;
  }
  return h;
}

Envelope HistogramEnsemble::envelope(const PercentileLevels& levels) const {
  levels.validate();
  if (iterations_ == 0) throw ParameterError("empty histogram ensemble");
  Envelope e;
  e.levels = levels;
  e.low.resize(bins_);
  e.high.resize(bins_);
  e.mean = mean().weights;
  std::vector<double> column(iterations_);
  for (std::size_t b = 0; b < bins_; ++b) {
    for (std::size_t it = 0; it < iterations_; ++it) {
      column[it] = static_cast<double>(weights_[it * bins_ + b]);
    }
    std::sort(column.begin(), column.end());
    e.low[b] = percentile_sorted(column, levels.low);
    e.high[b] = percentile_sorted(column, levels.high);
  }
  return e;
}

std::vector<HistogramEnsemble> simulate_histograms(const ElectionDataset& dataset,
                                                   std::span<const Metric> metrics,
                                                   const NullModel& model, std::uint64_t iterations,
                                                   std::uint64_t master_seed,
                                                   const HistogramOptions& options,
                                                   unsigned workers) {
  options.validate();
  if (iterations == 0) throw ParameterError("iteration budget must be positive");
  std::vector<HistogramEnsemble> ensembles;
  for (Metric m : metrics) ensembles.emplace_back(m, options.bin_width, iterations);

  const NullSimulator sim(dataset, model, master_seed);
  reduce_iterations(
      sim, iterations, workers, 0,
      [&](std::uint64_t it, std::span<const StationCounts> simulated, int&) {
        for (auto& ens : ensembles) {
          std::int64_t suppressed = 0;
          accumulate_histogram(simulated, ens.metric(), options,
                               static_cast<std::uint32_t>(it + 1), ens.row(it), suppressed);
        }
      },
      [](int&, const int&) {});
  return ensembles;
}

Envelope histogram_envelope(const ElectionDataset& dataset, Metric metric, const NullModel& model,
                            std::uint64_t iterations, const PercentileLevels& levels,
                            std::uint64_t master_seed, const HistogramOptions& options,
                            unsigned workers) {
  const Metric metrics[] = {metric};
  auto ensembles = simulate_histograms(dataset, metrics, model, iterations, master_seed, options, workers);
  return ensembles.front().envelope(levels);
}

WeightedHistogram average_histograms(std::span<const WeightedHistogram> histograms) {
  if (histograms.empty()) throw ParameterError("nothing to average");
  WeightedHistogram avg = histograms.front();
  for (std::size_t i = 1; i < histograms.size(); ++i) {
    require_same_grid(avg, histograms[i]);
    for (std::size_t b = 0; b < avg.size(); ++b) avg.weights[b] += histograms[i].weights[b];
    avg.suppressed_weight += histograms[i].suppressed_weight;
  }
  const double n = static_cast<double>(histograms.size());
  for (double& w : avg.weights) w /= n;
  avg.suppressed_weight /= n;
  return avg;
}

PeakShape peak_shape(std::span<const WeightedHistogram> empirical,
                     std::span<const WeightedHistogram> mc_mean) {
  if (empirical.empty() || empirical.size() != mc_mean.size()) {
    throw ParameterError("peak shape needs matching empirical and Monte Carlo histograms");
  }
  const Percent width = empirical.front().bin_width;
  const std::int64_t steps = Percent::kTicksPerPercent / width.ticks();
  if (steps % 2 != 0) throw ParameterError("bin width must divide 0.5% for peak extraction");
  const std::int64_t half = steps / 2;

  PeakShape shape;
  shape.offsets.resize(static_cast<std::size_t>(steps + 1));
  shape.mean_excess.assign(static_cast<std::size_t>(steps + 1), 0.0);
  for (std::int64_t j = -half; j <= half; ++j) {
    shape.offsets[static_cast<std::size_t>(j + half)] = Percent::from_ticks(j * width.ticks()).to_double();
  }

  for (std::size_t h = 0; h < empirical.size(); ++h) {
    require_same_grid(empirical[h], mc_mean[h]);
    if (empirical[h].bin_width != width) throw ParameterError("histograms are on different grids");
    for (std::int64_t k = 1; k <= 99; ++k) {
      const std::int64_t center = k * steps;
      for (std::int64_t j = -half; j <= half; ++j) {
        const auto b = static_cast<std::size_t>(center + j);
        shape.mean_excess[static_cast<std::size_t>(j + half)] +=
            empirical[h].weights[b] - mc_mean[h].weights[b];
      }
      ++shape.intervals;
    }
  }
  for (double& v : shape.mean_excess) v /= static_cast<double>(shape.intervals);
  return shape;
}

}  // namespace heaping
