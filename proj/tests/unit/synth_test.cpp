#include <gtest/gtest.h>

#include <map>

#include "heaping/anomaly.hpp"
#include "heaping/errors.hpp"
#include "heaping/synth.hpp"

namespace heaping {
namespace {

GeneratorConfig config(std::size_t n) {
  GeneratorConfig g;
  g.n_stations = n;
  g.size = LogNormalSize{};
  g.regions = 4;
  g.ballot_loss = 0.01;
  return g;
}

TEST(Generate, EmptyElection) {
  const auto e = generate(config(0), 1);
  EXPECT_TRUE(e.dataset.empty());
  EXPECT_TRUE(e.truth.empty());
}

TEST(Generate, DeterministicAcrossWorkers) {
  const auto a = generate(config(2000), 5, 1);
  const auto b = generate(config(2000), 5, 3);
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_NE(a.dataset, generate(config(2000), 6).dataset);
}

TEST(Generate, StationsAreConsistentAndLabelled) {
  const auto e = generate(config(1000), 2);
  ASSERT_EQ(e.truth.size(), 1000u);
  EXPECT_EQ(e.dataset.region_codes(), (std::vector<std::string>{"R00", "R01", "R02", "R03"}));
  EXPECT_EQ(e.dataset.stations()[7].station_id, "S000007");
  EXPECT_EQ(e.dataset.stations()[7].region_code, "R03");
  for (const auto& s : e.dataset.stations()) {
    ASSERT_TRUE(counts_consistent(s.counts));
    ASSERT_GE(s.counts.registered, 100);
    ASSERT_LE(s.counts.registered, 3000);
  }
}

TEST(Generate, FixedProbabilityMean) {
  GeneratorConfig g;
  g.n_stations = 20000;
  g.size = FixedSize{1000};
  g.turnout = FixedProbability{0.6};
  const auto e = generate(g, 3);
  const auto t = e.dataset.totals();
  EXPECT_NEAR(100.0 * static_cast<double>(t.given) / static_cast<double>(t.registered), 60.0, 0.05);
}

TEST(Generate, WarnsAboutTinyStations) {
  GeneratorConfig g;
  g.n_stations = 3;
  g.size = FixedSize{50};
  EXPECT_FALSE(generate(g, 1).warnings.empty());
}

TEST(Rounding, NumeratorLandsInWindow) {
  EXPECT_EQ(rounded_numerator(1000, 70, TargetSide::just_above, false), 700);
  // 700 ends in 0 and 701 (70.1%) leaves the window, so it stays.
  EXPECT_EQ(rounded_numerator(1000, 70, TargetSide::just_above, true), 700);
  EXPECT_EQ(rounded_numerator(3000, 70, TargetSide::just_above, true), 2101);
  EXPECT_FALSE(rounded_numerator(7, 70, TargetSide::just_above, false));
  for (Count d = 100; d <= 3000; d += 37) {
    for (int k = 70; k <= 99; ++k) {
      for (TargetSide side : {TargetSide::just_above, TargetSide::nearest}) {
        const auto g = rounded_numerator(d, k, side, true);
        if (!g) continue;
        const Count diff = 2000 * *g - 20 * k * d;  // 20 * d * (percent - k)
        if (side == TargetSide::just_above) {
          ASSERT_GE(diff, 0) << d << " " << k;
        }
        ASSERT_LE(std::abs(diff), d) << d << " " << k;
      }
    }
  }
}

TEST(Rounding, AvoidsRoundCountsWhenPossible) {
  std::size_t total = 0;
  for (Count d = 1000; d <= 3000; ++d) {
    const auto g = rounded_numerator(d, 80, TargetSide::just_above, true);
    if (!g) continue;
    ++total;
    if (*g % 10 == 0) {
      EXPECT_GT(2000 * (*g + 1), (20 * 80 + 1) * d) << d;  // g + 1 would leave the window
    }
  }
  EXPECT_GT(total, 0u);
}

TEST(Fraud, ZeroFractionIsIdentity) {
  const auto e = generate(config(500), 1).dataset;
  FraudSpec f;
  const auto r = inject_fraud(e, f, 4);
  EXPECT_EQ(r.dataset, e);
  EXPECT_EQ(r.modified, 0u);
  EXPECT_TRUE(r.log.empty());
}

TEST(Fraud, RoundingModifiesRequestedStations) {
  const auto e = generate(config(5000), 2).dataset;
  FraudSpec f;
  f.affected_fraction = 0.05;
  const auto r = inject_fraud(e, f, 9);
  EXPECT_EQ(r.requested, 250u);
  EXPECT_EQ(r.modified, 250u);
  std::map<std::string, StationCounts> after;
  for (const auto& s : r.dataset.stations()) after[s.station_id] = s.counts;
  const WindowSpec w{};
  std::size_t modified = 0;
  for (const auto& entry : r.log) {
    if (entry.status != InjectionStatus::modified) {
      EXPECT_EQ(entry.before, entry.after);
      continue;
    }
    ++modified;
    const auto& c = after.at(entry.station_id);
    EXPECT_EQ(c, entry.after);
    EXPECT_TRUE(counts_consistent(c));
    EXPECT_EQ(c.registered, entry.before.registered);
    ASSERT_TRUE(entry.metric && entry.target);
    const CountRatio v = *entry.metric == Metric::turnout ? CountRatio{c.given, c.registered}
                                                         : CountRatio{c.leader, c.cast};
    EXPECT_TRUE(is_in_window(v, w));
    EXPECT_GE(v.scaled_ticks(), Percent::from_ticks(*entry.target * 10'000).ticks() * v.denominator);
  }
  EXPECT_EQ(modified, 250u);
  EXPECT_EQ(r.dataset.size(), e.size());
}

TEST(Fraud, Deterministic) {
  const auto e = generate(config(2000), 3).dataset;
  FraudSpec f;
  f.affected_fraction = 0.1;
  f.mechanism = FraudMechanism::five_multiple_rounding;
  EXPECT_EQ(inject_fraud(e, f, 1).dataset, inject_fraud(e, f, 1).dataset);
  EXPECT_NE(inject_fraud(e, f, 1).dataset, inject_fraud(e, f, 2).dataset);
}

TEST(Fraud, RegionConcentration) {
  const auto e = generate(config(2000), 4).dataset;
  FraudSpec f;
  f.affected_fraction = 0.2;
  f.region_concentration = std::set<std::string>{"R01"};
  const auto r = inject_fraud(e, f, 3);
  EXPECT_EQ(r.requested, 100u);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.stations()[i].region_code != "R01") {
      EXPECT_EQ(e.stations()[i], r.dataset.stations()[i]);
    }
  }
}

TEST(Fraud, StuffingAndExtremeKeepCountsConsistent) {
  const auto e = generate(config(1000), 5).dataset;
  for (auto m : {FraudMechanism::ballot_stuffing, FraudMechanism::extreme_cluster}) {
    FraudSpec f;
    f.mechanism = m;
    f.affected_fraction = 0.3;
    const auto r = inject_fraud(e, f, 6);
    EXPECT_GT(r.modified, 0u);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& before = e.stations()[i].counts;
      const auto& after = r.dataset.stations()[i].counts;
      ASSERT_TRUE(counts_consistent(after));
      ASSERT_EQ(before.registered, after.registered);
      ASSERT_GE(after.leader, before.leader);
    }
  }
}

TEST(Fraud, ParseMechanism) {
  EXPECT_EQ(parse_fraud_mechanism("ballot_stuffing"), FraudMechanism::ballot_stuffing);
  EXPECT_EQ(to_string(FraudMechanism::extreme_cluster), "extreme_cluster");
  EXPECT_THROW(parse_fraud_mechanism("bogus"), ParameterError);
}

TEST(Fraud, DetectionGrowsWithFraction) {
  GeneratorConfig g;
  g.n_stations = 20000;
  g.size = LogNormalSize{};
  const auto clean = generate(g, 8).dataset;
  double previous = -1e9;
  for (double fraction : {0.0, 0.005, 0.02}) {
    FraudSpec f;
    f.affected_fraction = fraction;
    const auto d = inject_fraud(clean, f, 2).dataset;
    const auto r = run_null(d, StatisticDef{}, WindowSpec{}, NullModel::binomial(), 100, 3);
    ASSERT_TRUE(r.z_score);
    EXPECT_GT(*r.z_score, previous) << fraction;
    previous = *r.z_score;
  }
  EXPECT_GT(previous, 5.0);
}

}  // namespace
}  // namespace heaping
