#include <gtest/gtest.h>

#include <cmath>

#include "heaping/decomposition.hpp"
#include "heaping/errors.hpp"
#include "heaping/synth.hpp"

namespace heaping {
namespace {

ElectionDataset regional(std::uint64_t seed, std::size_t regions = 6, std::size_t n = 3000) {
  GeneratorConfig g;
  g.n_stations = n;
  g.size = LogNormalSize{};
  g.regions = regions;
  return generate(g, seed).dataset;
}

TEST(Candidates, TwentyNinePerMetric) {
  const auto c = peak_candidates(CenterKind::integer);
  ASSERT_EQ(c.size(), 29u);
  EXPECT_EQ(c.front(), Percent::from_ticks(700'000));
  EXPECT_EQ(c.back(), Percent::from_ticks(980'000));
  const auto h = peak_candidates(CenterKind::half_integer);
  ASSERT_EQ(h.size(), 29u);
  EXPECT_EQ(h.front(), Percent::from_ticks(705'000));
  EXPECT_EQ(h.back(), Percent::from_ticks(985'000));
}

TEST(Selection, ExcludeAndRestrictPartition) {
  const auto d = regional(1);
  const std::set<std::string> s = {"R01", "R04", "R99"};
  const auto out = exclude_regions(d, s);
  const auto in = exclude_regions(d, s, RegionMode::restrict_to);
  EXPECT_EQ(out.unknown_codes, std::vector<std::string>{"R99"});
  EXPECT_EQ(out.dataset.size() + in.dataset.size(), d.size());
  for (const auto& st : in.dataset.stations()) {
    EXPECT_TRUE(st.region_code == "R01" || st.region_code == "R04");
  }
  for (const auto& st : out.dataset.stations()) {
    EXPECT_TRUE(st.region_code != "R01" && st.region_code != "R04");
  }
}

TEST(Fingerprint, CellsAreAdditiveOverRegions) {
  const auto d = regional(2);
  const std::set<std::string> s = {"R00", "R02", "R05"};
  const auto a = fingerprint(exclude_regions(d, s).dataset);
  const auto b = fingerprint(exclude_regions(d, s, RegionMode::restrict_to).dataset);
  const auto whole = fingerprint(d);
  const auto sum = add_cells(a, b);
  EXPECT_EQ(sum.cells, whole.cells);
  EXPECT_EQ(sum.stations, whole.stations);
  EXPECT_FALSE(sum.correlation);
  EXPECT_EQ(whole.total(), static_cast<std::int64_t>(d.totals().registered));
}

TEST(Fingerprint, HistogramsAreAdditiveOverRegions) {
  const auto d = regional(3);
  const std::set<std::string> s = {"R03"};
  for (Metric m : {Metric::turnout, Metric::result}) {
    const auto a = build_histogram(exclude_regions(d, s).dataset, m);
    const auto b = build_histogram(exclude_regions(d, s, RegionMode::restrict_to).dataset, m);
    const auto w = build_histogram(d, m);
    for (std::size_t i = 0; i < w.size(); ++i) ASSERT_EQ(a.weights[i] + b.weights[i], w.weights[i]);
  }
}

TEST(Fingerprint, BinsAndCorrelation) {
  EXPECT_EQ(fingerprint_bin({0, 10}), 0u);
  EXPECT_EQ(fingerprint_bin({1, 200}), 1u);      // exactly 0.5%
  EXPECT_EQ(fingerprint_bin({199, 400}), 99u);   // 49.75%
  EXPECT_EQ(fingerprint_bin({10, 10}), 199u);    // 100% joins the last cell
  std::vector<StationRecord> rows;
  for (int i = 0; i < 20; ++i) {
    const Count g = 500 + 20 * i;
    rows.push_back({"s" + std::to_string(i), "R", "C", {1000, g, g, g / 2 + 10 * i}});
  }
  const auto fp = fingerprint(ElectionDataset("t", rows));
  ASSERT_TRUE(fp.correlation);
  EXPECT_GT(*fp.correlation, 0.9);
  EXPECT_EQ(fp.stations, 20u);
}

TEST(RegionPeaks, FraudulentRegionRanksFirst) {
  const auto clean = regional(4, 6, 6000);
  FraudSpec f;
  f.mechanism = FraudMechanism::integer_rounding;
  f.affected_fraction = 0.6;
  f.region_concentration = std::set<std::string>{"R02"};
  const auto dirty = inject_fraud(clean, f, 8).dataset;
  const std::vector<ElectionDataset> years = {dirty};
  const auto t = region_peaks(years, NullModel::binomial(), 100, 3, CenterKind::integer);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(top_regions(t, 1), std::vector<std::string>{"R02"});
  const auto& loc = t.ranking.front().location;
  EXPECT_GE(loc.center, Percent::from_ticks(700'000));
  EXPECT_LE(loc.center, Percent::from_ticks(980'000));
  for (std::size_t i = 1; i < t.ranking.size(); ++i) {
    EXPECT_GE(t.ranking[i - 1].max_amplitude, t.ranking[i].max_amplitude);
  }
}

TEST(RegionPeaks, MissingRegionInAYearHasNoAmplitude) {
  const auto a = regional(5, 3, 900);
  const auto b = exclude_regions(regional(6, 3, 900), {"R01"}).dataset;
  const std::vector<ElectionDataset> years = {ElectionDataset("y1", a.stations()),
                                              ElectionDataset("y2", b.stations())};
  const auto t = region_peaks(years, NullModel::binomial(), 100, 1, CenterKind::half_integer);
  ASSERT_EQ(t.rows.size(), 6u);
  std::size_t missing = 0;
  for (const auto& r : t.rows) {
    if (r.year == "y2" && r.region == "R01") {
      EXPECT_FALSE(r.amplitude);
      EXPECT_EQ(r.stations, 0u);
      ++missing;
    } else {
      EXPECT_TRUE(r.amplitude);
    }
  }
  EXPECT_EQ(missing, 1u);
  EXPECT_EQ(t.ranking.size(), 3u);
}

TEST(RegionPeaks, WorkerCountDoesNotMatter) {
  const std::vector<ElectionDataset> years = {regional(7, 4, 1200)};
  RegionPeakOptions one, four;
  one.workers = 1;
  four.workers = 4;
  const auto a = region_peaks(years, NullModel::beta_binomial(), 100, 2, CenterKind::integer, one);
  const auto b = region_peaks(years, NullModel::beta_binomial(), 100, 2, CenterKind::integer, four);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].amplitude, b.rows[i].amplitude);
}

}  // namespace
}  // namespace heaping
