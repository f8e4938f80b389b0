#include "heaping/anomaly.hpp"

#include <algorithm>

#include "heaping/errors.hpp"
#include "heaping/simulation.hpp"

namespace heaping {

namespace {

constexpr std::int64_t kCenterSpacing = Percent::kTicksPerPercent;
constexpr std::int64_t kHalfSpacing = Percent::kTicksPerPercent / 2;

bool ends_in_zero(Count c) { return c % 10 == 0; }

bool exceeds(const CountRatio& r, Percent limit) { return !r.at_most(limit); }

}  // namespace

std::string_view to_string(CenterKind kind) {
  return kind == CenterKind::integer ? "integer" : "half_integer";
}

void WindowSpec::validate() const {
  if (half_width.ticks() <= 0 || half_width.ticks() > kHalfSpacing) {
    throw ParameterError("window half-width must be in (0, 0.5]");
  }
}

bool is_in_window(const CountRatio& value, const WindowSpec& window) {
  const std::int64_t den = value.denominator;
  if (den <= 0) return false;
  const std::int64_t offset = window.centers == CenterKind::integer ? 0 : kHalfSpacing;
  const std::int64_t period = kCenterSpacing * den;
  std::int64_t r = (value.scaled_ticks() - offset * den) % period;
  if (r < 0) r += period;
  const std::int64_t distance = std::min(r, period - r);
  return distance <= window.half_width.ticks() * den;
}

std::string StatisticDef::name() const {
  std::string n;
  switch (scope) {
    case MetricScope::turnout_or_result: n = "turnout_or_result"; break;
    case MetricScope::turnout_only: n = "turnout_only"; break;
    case MetricScope::result_only: n = "result_only"; break;
  }
  if (weighting == Weighting::registered_voters) n += ".voters";
  if (zero_exclusion) n += ".nozero";
  return n;
}

double station_contribution(const StationCounts& c, const StatisticDef& stat,
                            const WindowSpec& window) {
  if (c.registered <= 0) return 0.0;
  bool hit = false;
  if (stat.scope != MetricScope::result_only &&
      !(stat.zero_exclusion && (ends_in_zero(c.given) || ends_in_zero(c.registered)))) {
    hit = is_in_window(CountRatio{c.given, c.registered}, window);
  }
  if (!hit && stat.scope != MetricScope::turnout_only && c.cast > 0 &&
      !(stat.zero_exclusion && (ends_in_zero(c.leader) || ends_in_zero(c.cast)))) {
    hit = is_in_window(CountRatio{c.leader, c.cast}, window);
  }
  if (!hit) return 0.0;
  return stat.weighting == Weighting::station_count ? 1.0 : static_cast<double>(c.registered);
}

double empirical_statistic(const ElectionDataset& dataset, const StatisticDef& stat,
                           const WindowSpec& window) {
  window.validate();
  double q = 0.0;
  for (const auto& s : dataset.stations()) q += station_contribution(s.counts, stat, window);
  return q;
}

AnomalyReport summarize_null(double empirical, std::vector<double> mc_samples,
                             const PercentileLevels& levels) {
  if (mc_samples.empty()) throw ParameterError("no Monte Carlo samples to summarize");
  levels.validate();
  AnomalyReport r;
  r.empirical = empirical;
  r.levels = levels;
  r.iterations = mc_samples.size();
  r.mc_mean = mean(mc_samples);
  r.mc_sd = sample_sd(mc_samples);

  std::vector<double> sorted = mc_samples;
  std::sort(sorted.begin(), sorted.end());
  r.mc_min = sorted.front();
  r.mc_max = sorted.back();
  r.mc_median = percentile_sorted(sorted, 0.5);
  r.percentile_low = percentile_sorted(sorted, levels.low);
  r.percentile_high = percentile_sorted(sorted, levels.high);

  r.anomaly_size = empirical - r.mc_mean;
  if (r.mc_sd > 0.0) {
    r.z_score = r.anomaly_size / r.mc_sd;
  } else if (r.anomaly_size == 0.0) {
    r.z_score = 0.0;
  }

  const auto at_least = std::count_if(sorted.begin(), sorted.end(),
                                      [&](double v) { return v >= empirical; });
  if (at_least == 0) {
    r.p_value = 1.0 / static_cast<double>(sorted.size());
    r.p_value_is_bound = true;
  } else {
    r.p_value = static_cast<double>(at_least) / static_cast<double>(sorted.size());
  }
  r.mc_samples = std::move(mc_samples);
  return r;
}

std::vector<AnomalyReport> run_null(const ElectionDataset& dataset,
                                    std::span<const StatisticRequest> requests,
                                    const NullModel& model, std::uint64_t iterations,
                                    std::uint64_t master_seed, const NullRunOptions& options) {
  if (iterations < kMinIterations) {
    throw ParameterError("Monte Carlo needs at least " + std::to_string(kMinIterations) +
                         " iterations, got " + std::to_string(iterations));
  }
  options.levels.validate();
  for (const auto& req : requests) req.window.validate();

  const NullSimulator sim(dataset, model, master_seed);
  std::vector<std::vector<double>> samples(requests.size(), std::vector<double>(iterations));

  const bool refilter = options.refilter_simulated;
  const Percent max_pct = options.refilter_policy.max_percentage;
  reduce_iterations(
      sim, iterations, options.workers, 0,
      [&](std::uint64_t it, std::span<const StationCounts> simulated, int&) {
        std::vector<double> q(requests.size(), 0.0);
        for (const auto& c : simulated) {
          if (refilter && (exceeds(CountRatio{c.given, c.registered}, max_pct) ||
                           (c.cast > 0 && exceeds(CountRatio{c.leader, c.cast}, max_pct)))) {
            continue;
          }
          for (std::size_t k = 0; k < requests.size(); ++k) {
            q[k] += station_contribution(c, requests[k].stat, requests[k].window);
          }
        }
        for (std::size_t k = 0; k < requests.size(); ++k) samples[k][it] = q[k];
      },
      [](int&, const int&) {});

  std::vector<AnomalyReport> reports;
  reports.reserve(requests.size());
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const double emp = empirical_statistic(dataset, requests[k].stat, requests[k].window);
    AnomalyReport r = summarize_null(emp, std::move(samples[k]), options.levels);
    r.statistic = requests[k].stat.name();
    r.window = requests[k].window;
    r.model = model.to_string();
    r.master_seed = master_seed;
    r.stations = dataset.size();
    reports.push_back(std::move(r));
  }
  return reports;
}

AnomalyReport run_null(const ElectionDataset& dataset, const StatisticDef& stat,
                       const WindowSpec& window, const NullModel& model, std::uint64_t iterations,
                       std::uint64_t master_seed, const NullRunOptions& options) {
  const StatisticRequest req{stat, window};
  return std::move(run_null(dataset, std::span(&req, 1), model, iterations, master_seed, options).front());
}

std::vector<AnomalyReport> window_sweep(const ElectionDataset& dataset, const StatisticDef& stat,
                                        const NullModel& model, std::uint64_t iterations,
                                        std::span<const Percent> half_widths,
                                        std::uint64_t master_seed, const NullRunOptions& options,
                                        CenterKind centers) {
  if (half_widths.empty()) throw ParameterError("window sweep needs at least one half-width");
  std::vector<StatisticRequest> requests;
  requests.reserve(half_widths.size());
  for (Percent hw : half_widths) requests.push_back({stat, WindowSpec{centers, hw}});
  return run_null(dataset, requests, model, iterations, master_seed, options);
}

}  // namespace heaping
