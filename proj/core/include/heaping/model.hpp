#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heaping {

using Count = std::int64_t;

/// Fixed-point percentage. One tick is 1e-4 percentage points, so the
/// usual 0.05 half-width is exactly 500 ticks and 99% is 990'000 ticks.
class Percent {
 public:
  static constexpr std::int64_t kTicksPerPercent = 10'000;

  constexpr Percent() = default;
  static constexpr Percent from_ticks(std::int64_t ticks) { return Percent(ticks); }
  /// Rounds to the nearest tick.
  static Percent from_double(double percent);

  constexpr std::int64_t ticks() const { return ticks_; }
  constexpr double to_double() const {
    return static_cast<double>(ticks_) / static_cast<double>(kTicksPerPercent);
  }

  constexpr auto operator<=>(const Percent&) const = default;

 private:
  constexpr explicit Percent(std::int64_t ticks) : ticks_(ticks) {}
  std::int64_t ticks_ = 0;
};

/// numerator/denominator*100%, kept as integers so that window and bin
/// membership never depends on floating-point accumulation.
struct CountRatio {
  Count numerator = 0;
  Count denominator = 1;

  double percent() const {
    return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  /// numerator * 1e6, i.e. the percentage in ticks scaled by the denominator.
  std::int64_t scaled_ticks() const { return numerator * 100 * Percent::kTicksPerPercent; }
  bool at_most(Percent limit) const { return scaled_ticks() <= limit.ticks() * denominator; }
  bool at_least(Percent limit) const { return scaled_ticks() >= limit.ticks() * denominator; }
};

struct StationCounts {
  Count registered = 0;  // V
  Count given = 0;       // G
  Count cast = 0;        // B
  Count leader = 0;      // L

  bool operator==(const StationCounts&) const = default;
};

struct StationRecord {
  std::string station_id;
  std::string region_code;
  std::string constituency_id;
  StationCounts counts;

  bool operator==(const StationRecord&) const = default;
};

/// True when leader <= cast <= given <= registered and nothing is negative.
bool counts_consistent(const StationCounts& counts);

struct StationMetrics {
  CountRatio turnout;                // given / registered
  std::optional<CountRatio> result;  // leader / cast, absent when cast == 0
};

/// Throws DomainError naming the station when registered == 0.
StationMetrics compute_metrics(const StationRecord& record);

enum class ExclusionReason {
  invalid_counts,
  too_small,
  over_max_turnout,
  over_max_result,
  undefined_result,
};

std::string_view to_string(ExclusionReason reason);

struct FilterLogEntry {
  std::string station_id;
  ExclusionReason reason;

  bool operator==(const FilterLogEntry&) const = default;
};

struct FilterPolicy {
  Count min_registered = 100;
  Percent max_percentage = Percent::from_ticks(99 * Percent::kTicksPerPercent);
  bool exclude_undefined_result = true;
};

/// Validated, immutable collection of stations for one election.
/// Station ids are unique; the constructor throws DomainError otherwise.
class ElectionDataset {
 public:
  ElectionDataset() = default;
  ElectionDataset(std::string label, std::vector<StationRecord> stations,
                  std::vector<FilterLogEntry> filter_log = {});

  const std::string& label() const { return label_; }
  const std::vector<StationRecord>& stations() const { return stations_; }
  const std::vector<FilterLogEntry>& filter_log() const { return filter_log_; }
  std::size_t size() const { return stations_.size(); }
  bool empty() const { return stations_.empty(); }

  /// Sorted, de-duplicated region codes.
  std::vector<std::string> region_codes() const;
  StationCounts totals() const;

  bool operator==(const ElectionDataset&) const = default;

 private:
  std::string label_;
  std::vector<StationRecord> stations_;
  std::vector<FilterLogEntry> filter_log_;
};

/// Returns the first exclusion reason that applies, if any. Precedence is
/// invalid_counts, too_small, over_max_turnout, over_max_result,
/// undefined_result.
std::optional<ExclusionReason> exclusion_reason(const StationCounts& counts,
                                                const FilterPolicy& policy);

/// Keeps surviving stations and appends one log entry per excluded station
/// to the existing filter log. Idempotent.
ElectionDataset apply_filters(const ElectionDataset& dataset, const FilterPolicy& policy = {});

}  // namespace heaping
