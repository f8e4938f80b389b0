#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "heaping/anomaly.hpp"
#include "heaping/shape.hpp"

namespace heaping {

/// Peak candidates: centres c with 70 <= c < 99, i.e. 70..98 or
/// 70.5..98.5, 29 per metric and 58 over turnout and result.
std::vector<Percent> peak_candidates(CenterKind centers);

struct PeakLocation {
  Metric metric = Metric::turnout;
  Percent center;
};

struct RegionPeakRow {
  std::string region;
  std::string year;  // dataset label
  std::size_t stations = 0;
  /// Largest empirical-minus-MC-mean excess over the candidates, in
  /// registered voters. Absent when the region has no stations that year.
  std::optional<double> amplitude;
  std::optional<PeakLocation> location;
};

struct RegionRank {
  std::string region;
  double max_amplitude = 0.0;
  std::string year;
  PeakLocation location;
};

struct RegionPeakTable {
  CenterKind centers = CenterKind::integer;
  std::vector<RegionPeakRow> rows;   // year-major, regions sorted
  std::vector<RegionRank> ranking;   // by max amplitude over years, descending
};

struct RegionPeakOptions {
  unsigned workers = 0;
  Percent bin_width = Percent::from_ticks(1000);
};

/// Per-region, per-year maximal peak. The Monte Carlo draws are the
/// national ones (same per-station seeds as run_null on each year's
/// dataset); regions only partition the stations. Ties go to the lower
/// percentage, then turnout before result.
RegionPeakTable region_peaks(std::span<const ElectionDataset> years, const NullModel& model,
                             std::uint64_t iterations, std::uint64_t master_seed,
                             CenterKind centers, const RegionPeakOptions& options = {});

/// First `count` regions of the ranking.
std::vector<std::string> top_regions(const RegionPeakTable& table, std::size_t count);

enum class RegionMode { exclude, restrict_to };

struct RegionSelection {
  ElectionDataset dataset;
  std::vector<std::string> unknown_codes;  // requested but absent from the data
};

RegionSelection exclude_regions(const ElectionDataset& dataset, const std::set<std::string>& codes,
                                RegionMode mode = RegionMode::exclude);

struct FingerprintOptions {
  bool weighted_correlation = false;
};

/// Joint turnout x result histogram in 0.5% cells ([0, 0.5), ..., [99.5, 100]),
/// cell weight = registered voters, plus the station-level Pearson
/// correlation of turnout and result.
struct Fingerprint2D {
  static constexpr std::size_t kBins = 200;
  static constexpr double kBinWidth = 0.5;

  std::vector<std::int64_t> cells = std::vector<std::int64_t>(kBins * kBins, 0);  // [turnout][result]
  std::optional<double> correlation;
  std::size_t stations = 0;

  std::int64_t at(std::size_t turnout_bin, std::size_t result_bin) const {
    return cells[turnout_bin * kBins + result_bin];
  }
  std::int64_t total() const;
};

std::size_t fingerprint_bin(const CountRatio& value);

/// Stations without cast ballots are left out.
Fingerprint2D fingerprint(const ElectionDataset& dataset, const FingerprintOptions& options = {});

/// Cell-wise sum; the correlation is not additive and is left absent.
Fingerprint2D add_cells(const Fingerprint2D& a, const Fingerprint2D& b);

}  // namespace heaping
