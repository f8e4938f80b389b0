#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heaping/model.hpp"
#include "heaping/sampling.hpp"
#include "heaping/stats.hpp"

namespace heaping {

enum class CenterKind { integer, half_integer };

std::string_view to_string(CenterKind kind);

/// Percentages within half_width of k (integer) or k + 0.5 (half_integer).
struct WindowSpec {
  CenterKind centers = CenterKind::integer;
  Percent half_width = Percent::from_ticks(500);

  /// Throws ParameterError unless 0 < half_width <= 0.5.
  void validate() const;
};

/// Boundary counts as inside. Exact integer arithmetic on the ratio.
bool is_in_window(const CountRatio& value, const WindowSpec& window);

enum class MetricScope { turnout_or_result, turnout_only, result_only };
enum class Weighting { station_count, registered_voters };

struct StatisticDef {
  MetricScope scope = MetricScope::turnout_or_result;
  Weighting weighting = Weighting::station_count;
  /// Drop round counts: for turnout, stations whose given or registered
  /// count ends in 0; for result, stations whose leader or cast count does.
  bool zero_exclusion = false;

  /// Short stable identifier, e.g. "turnout_or_result", "result_only.voters.nozero".
  std::string name() const;
};

/// Contribution of one station (0, 1, or its registered count).
/// Stations without cast ballots never contribute through the result.
double station_contribution(const StationCounts& counts, const StatisticDef& stat,
                            const WindowSpec& window);

/// q: number (or registered-voter mass) of stations with an in-scope metric
/// inside the window. A station in the window on both metrics counts once.
double empirical_statistic(const ElectionDataset& dataset, const StatisticDef& stat,
                           const WindowSpec& window);

struct AnomalyReport {
  std::string statistic;
  WindowSpec window;
  std::string model;
  std::uint64_t master_seed = 0;
  std::uint64_t iterations = 0;
  std::size_t stations = 0;

  double empirical = 0.0;
  std::vector<double> mc_samples;  // indexed by iteration
  double mc_mean = 0.0;
  double mc_sd = 0.0;
  double mc_min = 0.0;
  double mc_median = 0.0;
  double mc_max = 0.0;
  PercentileLevels levels;
  double percentile_low = 0.0;
  double percentile_high = 0.0;
  /// (empirical - mc_mean) / mc_sd; 0 when the null is degenerate at the
  /// empirical value, absent when it is degenerate elsewhere.
  std::optional<double> z_score;
  double anomaly_size = 0.0;
  /// Fraction of MC samples >= empirical. When none is, this holds
  /// 1/iterations and p_value_is_bound is set ("p < 1/iterations").
  double p_value = 1.0;
  bool p_value_is_bound = false;
};

/// Builds the summary fields from the empirical value and the MC samples.
AnomalyReport summarize_null(double empirical, std::vector<double> mc_samples,
                             const PercentileLevels& levels);

struct NullRunOptions {
  unsigned workers = 0;
  PercentileLevels levels;
  /// Sensitivity toggle: drop stations whose simulated turnout or result
  /// exceeds refilter_policy.max_percentage from that iteration's count.
  bool refilter_simulated = false;
  FilterPolicy refilter_policy;
};

struct StatisticRequest {
  StatisticDef stat;
  WindowSpec window;
};

inline constexpr std::uint64_t kMinIterations = 100;

/// Evaluates several statistics on the same simulated elections.
/// Throws ParameterError when iterations < kMinIterations.
std::vector<AnomalyReport> run_null(const ElectionDataset& dataset,
                                    std::span<const StatisticRequest> requests,
                                    const NullModel& model, std::uint64_t iterations,
                                    std::uint64_t master_seed, const NullRunOptions& options = {});

AnomalyReport run_null(const ElectionDataset& dataset, const StatisticDef& stat,
                       const WindowSpec& window, const NullModel& model, std::uint64_t iterations,
                       std::uint64_t master_seed, const NullRunOptions& options = {});

/// One report per half-width, all on the same simulated elections.
std::vector<AnomalyReport> window_sweep(const ElectionDataset& dataset, const StatisticDef& stat,
                                        const NullModel& model, std::uint64_t iterations,
                                        std::span<const Percent> half_widths,
                                        std::uint64_t master_seed,
                                        const NullRunOptions& options = {},
                                        CenterKind centers = CenterKind::integer);

}  // namespace heaping
