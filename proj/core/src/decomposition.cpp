#include "heaping/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "heaping/errors.hpp"
#include "heaping/simulation.hpp"

namespace heaping {

namespace {

constexpr std::int64_t kLowestCandidate = 70 * Percent::kTicksPerPercent;
constexpr std::int64_t kCandidateLimit = 99 * Percent::kTicksPerPercent;
constexpr Metric kMetrics[] = {Metric::turnout, Metric::result};

struct CandidateGrid {
  std::vector<Percent> centers;
  std::vector<int> bin_to_candidate;  // -1 when the bin is not a candidate
};

CandidateGrid make_grid(CenterKind kind, Percent bin_width) {
  const std::int64_t w = bin_width.ticks();
  if ((Percent::kTicksPerPercent / 2) % w != 0) {
    throw ParameterError("region peaks need a bin width dividing 0.5%");
  }
  CandidateGrid g;
  g.centers = peak_candidates(kind);
  g.bin_to_candidate.assign(bin_count(bin_width), -1);
  for (std::size_t c = 0; c < g.centers.size(); ++c) {
    g.bin_to_candidate[static_cast<std::size_t>(g.centers[c].ticks() / w)] = static_cast<int>(c);
  }
  return g;
}

// Weights laid out [region][metric][candidate].
void accumulate_candidates(std::span<const StationCounts> counts, std::span<const std::size_t> region_of,
                           const CandidateGrid& grid, Percent bin_width, std::span<std::int64_t> out) {
  const std::size_t nc = grid.centers.size();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t m = 0; m < 2; ++m) {
      const auto ratio = metric_ratio(counts[i], kMetrics[m]);
      if (!ratio) continue;
      const int cand = grid.bin_to_candidate[bin_index(*ratio, bin_width)];
      if (cand < 0) continue;
      out[(region_of[i] * 2 + m) * nc + static_cast<std::size_t>(cand)] += counts[i].registered;
    }
  }
}

double pearson(std::span<const double> x, std::span<const double> y, std::span<const double> w,
               bool& defined) {
  double sw = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += w[i] * dx * dx;
    syy += w[i] * dy * dy;
    sxy += w[i] * dx * dy;
  }
  defined = sxx > 0.0 && syy > 0.0;
  return defined ? sxy / std::sqrt(sxx * syy) : 0.0;
}

}  // namespace

std::vector<Percent> peak_candidates(CenterKind centers) {
  std::vector<Percent> out;
  const std::int64_t offset = centers == CenterKind::integer ? 0 : Percent::kTicksPerPercent / 2;
  for (std::int64_t t = kLowestCandidate + offset; t < kCandidateLimit; t += Percent::kTicksPerPercent) {
    out.push_back(Percent::from_ticks(t));
  }
  return out;
}

RegionPeakTable region_peaks(std::span<const ElectionDataset> years, const NullModel& model,
                             std::uint64_t iterations, std::uint64_t master_seed,
                             CenterKind centers, const RegionPeakOptions& options) {
  if (iterations == 0) throw ParameterError("iteration budget must be positive");
  const CandidateGrid grid = make_grid(centers, options.bin_width);
  const std::size_t nc = grid.centers.size();

  std::vector<std::string> regions;
  for (const auto& year : years) {
    for (auto& code : year.region_codes()) regions.push_back(code);
  }
  std::sort(regions.begin(), regions.end());
  regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
  std::unordered_map<std::string, std::size_t> region_index;
  for (std::size_t r = 0; r < regions.size(); ++r) region_index.emplace(regions[r], r);

  RegionPeakTable table;
  table.centers = centers;
  std::map<std::string, RegionRank> best;

  for (const auto& year : years) {
    std::vector<StationCounts> counts;
    std::vector<std::size_t> region_of;
    std::vector<std::size_t> stations_per_region(regions.size(), 0);
    counts.reserve(year.size());
    region_of.reserve(year.size());
    for (const auto& s : year.stations()) {
      counts.push_back(s.counts);
      const std::size_t r = region_index.at(s.region_code);
      region_of.push_back(r);
      ++stations_per_region[r];
    }

    const std::size_t cells = regions.size() * 2 * nc;
    std::vector<std::int64_t> empirical(cells, 0);
    accumulate_candidates(counts, region_of, grid, options.bin_width, empirical);

    const NullSimulator sim(year, model, master_seed);
    const auto mc_sum = reduce_iterations(
        sim, iterations, options.workers, std::vector<std::int64_t>(cells, 0),
        [&](std::uint64_t, std::span<const StationCounts> simulated, std::vector<std::int64_t>& acc) {
          accumulate_candidates(simulated, region_of, grid, options.bin_width, acc);
        },
        [](std::vector<std::int64_t>& total, const std::vector<std::int64_t>& part) {
          for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
        });

    for (std::size_t r = 0; r < regions.size(); ++r) {
      RegionPeakRow row;
      row.region = regions[r];
      row.year = year.label();
      row.stations = stations_per_region[r];
      if (row.stations > 0) {
        // Candidates visited by ascending centre, turnout first: strict '>'
        // keeps the earliest on ties.
        for (std::size_t c = 0; c < nc; ++c) {
          for (std::size_t m = 0; m < 2; ++m) {
            const std::size_t cell = (r * 2 + m) * nc + c;
            const double excess = static_cast<double>(empirical[cell]) -
                                  static_cast<double>(mc_sum[cell]) / static_cast<double>(iterations);
            if (!row.amplitude || excess > *row.amplitude) {
              row.amplitude = excess;
              row.location = PeakLocation{kMetrics[m], grid.centers[c]};
            }
          }
        }
        auto it = best.find(row.region);
        if (it == best.end() || *row.amplitude > it->second.max_amplitude) {
          best[row.region] = RegionRank{row.region, *row.amplitude, row.year, *row.location};
        }
      }
      table.rows.push_back(std::move(row));
    }
  }

  for (auto& [code, rank] : best) table.ranking.push_back(rank);
  std::stable_sort(table.ranking.begin(), table.ranking.end(),
                   [](const RegionRank& a, const RegionRank& b) { return a.max_amplitude > b.max_amplitude; });
  return table;
}

std::vector<std::string> top_regions(const RegionPeakTable& table, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(count, table.ranking.size()); ++i) {
    out.push_back(table.ranking[i].region);
  }
  return out;
}

RegionSelection exclude_regions(const ElectionDataset& dataset, const std::set<std::string>& codes,
                                RegionMode mode) {
  RegionSelection sel;
  const auto present = dataset.region_codes();
  for (const auto& code : codes) {
    if (!std::binary_search(present.begin(), present.end(), code)) sel.unknown_codes.push_back(code);
  }
  std::vector<StationRecord> kept;
  for (const auto& s : dataset.stations()) {
    const bool listed = codes.contains(s.region_code);
    if (listed == (mode == RegionMode::restrict_to)) kept.push_back(s);
  }
  sel.dataset = ElectionDataset(dataset.label(), std::move(kept), dataset.filter_log());
  return sel;
}

std::int64_t Fingerprint2D::total() const {
  std::int64_t t = 0;
  for (auto c : cells) t += c;
  return t;
}

std::size_t fingerprint_bin(const CountRatio& value) {
  const std::int64_t cell = Percent::kTicksPerPercent / 2 * value.denominator;
  const std::int64_t idx = value.scaled_ticks() / cell;
  return std::min<std::size_t>(static_cast<std::size_t>(std::max<std::int64_t>(idx, 0)),
                               Fingerprint2D::kBins - 1);
}

Fingerprint2D fingerprint(const ElectionDataset& dataset, const FingerprintOptions& options) {
  Fingerprint2D fp;
  std::vector<double> turnout, result, weight;
  for (const auto& s : dataset.stations()) {
    const auto t = metric_ratio(s.counts, Metric::turnout);
    const auto r = metric_ratio(s.counts, Metric::result);
    if (!t || !r) continue;
    fp.cells[fingerprint_bin(*t) * Fingerprint2D::kBins + fingerprint_bin(*r)] += s.counts.registered;
    turnout.push_back(t->percent());
    result.push_back(r->percent());
    weight.push_back(options.weighted_correlation ? static_cast<double>(s.counts.registered) : 1.0);
  }
  fp.stations = turnout.size();
  if (fp.stations >= 2) {
    bool defined = false;
    const double rho = pearson(turnout, result, weight, defined);
    if (defined) fp.correlation = rho;
  }
  return fp;
}

Fingerprint2D add_cells(const Fingerprint2D& a, const Fingerprint2D& b) {
  Fingerprint2D out;
  for (std::size_t i = 0; i < out.cells.size(); ++i) out.cells[i] = a.cells[i] + b.cells[i];
  out.stations = a.stations + b.stations;
  return out;
}

}  // namespace heaping
