#include "heaping/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "heaping/errors.hpp"

namespace heaping {

Percent Percent::from_double(double percent) {
  if (!std::isfinite(percent)) {
    throw ParameterError("percentage must be finite");
  }
  return Percent(std::llround(percent * static_cast<double>(kTicksPerPercent)));
}

bool counts_consistent(const StationCounts& c) {
  return c.leader >= 0 && c.leader <= c.cast && c.cast <= c.given && c.given <= c.registered;
}

StationMetrics compute_metrics(const StationRecord& record) {
  const auto& c = record.counts;
  if (c.registered <= 0) {
    throw DomainError("station '" + record.station_id + "' has no registered voters");
  }
  StationMetrics metrics;
  metrics.turnout = CountRatio{c.given, c.registered};
  if (c.cast > 0) {
    metrics.result = CountRatio{c.leader, c.cast};
  }
  return metrics;
}

std::string_view to_string(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::invalid_counts: return "invalid_counts";
    case ExclusionReason::too_small: return "too_small";
    case ExclusionReason::over_max_turnout: return "over_max_turnout";
    case ExclusionReason::over_max_result: return "over_max_result";
    case ExclusionReason::undefined_result: return "undefined_result";
  }
  return "unknown";
}

ElectionDataset::ElectionDataset(std::string label, std::vector<StationRecord> stations,
                                 std::vector<FilterLogEntry> filter_log)
    : label_(std::move(label)), stations_(std::move(stations)), filter_log_(std::move(filter_log)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(stations_.size());
  for (const auto& s : stations_) {
    if (!seen.insert(s.station_id).second) {
      throw DomainError("duplicate station_id '" + s.station_id + "' in dataset '" + label_ + "'");
    }
  }
}

std::vector<std::string> ElectionDataset::region_codes() const {
  std::vector<std::string> codes;
  codes.reserve(stations_.size());
  for (const auto& s : stations_) codes.push_back(s.region_code);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

StationCounts ElectionDataset::totals() const {
  StationCounts t;
  for (const auto& s : stations_) {
    t.registered += s.counts.registered;
    t.given += s.counts.given;
    t.cast += s.counts.cast;
    t.leader += s.counts.leader;
  }
  return t;
}

std::optional<ExclusionReason> exclusion_reason(const StationCounts& c, const FilterPolicy& policy) {
  if (!counts_consistent(c) || c.registered == 0) return ExclusionReason::invalid_counts;
  if (c.registered < policy.min_registered) return ExclusionReason::too_small;
  if (!CountRatio{c.given, c.registered}.at_most(policy.max_percentage)) {
    return ExclusionReason::over_max_turnout;
  }
  if (c.cast > 0 && !CountRatio{c.leader, c.cast}.at_most(policy.max_percentage)) {
    return ExclusionReason::over_max_result;
  }
  if (c.cast == 0 && policy.exclude_undefined_result) return ExclusionReason::undefined_result;
  return std::nullopt;
}

ElectionDataset apply_filters(const ElectionDataset& dataset, const FilterPolicy& policy) {
  std::vector<StationRecord> kept;
  kept.reserve(dataset.size());
  std::vector<FilterLogEntry> log = dataset.filter_log();
  for (const auto& s : dataset.stations()) {
    if (auto reason = exclusion_reason(s.counts, policy)) {
      log.push_back({s.station_id, *reason});
    } else {
      kept.push_back(s);
    }
  }
  return ElectionDataset(dataset.label(), std::move(kept), std::move(log));
}

}  // namespace heaping
