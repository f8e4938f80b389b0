#include <gtest/gtest.h>

#include <cmath>

#include "heaping/errors.hpp"
#include "heaping/model.hpp"

namespace heaping {
namespace {

StationRecord station(std::string id, Count v, Count g, Count b, Count l, std::string region = "R") {
  return {std::move(id), std::move(region), "", {v, g, b, l}};
}

TEST(Percent, TicksAndRounding) {
  EXPECT_EQ(Percent::from_double(0.05).ticks(), 500);
  EXPECT_EQ(Percent::from_double(99.0).ticks(), 990000);
  EXPECT_DOUBLE_EQ(Percent::from_ticks(1000).to_double(), 0.1);
  EXPECT_LT(Percent::from_ticks(1), Percent::from_ticks(2));
  EXPECT_THROW(Percent::from_double(std::nan("")), ParameterError);
}

TEST(CountRatio, ExactComparisons) {
  const CountRatio r{990, 1000};
  EXPECT_TRUE(r.at_most(Percent::from_double(99.0)));
  EXPECT_TRUE(r.at_least(Percent::from_double(99.0)));
  EXPECT_FALSE((CountRatio{991, 1000}).at_most(Percent::from_double(99.0)));
  EXPECT_DOUBLE_EQ(r.percent(), 99.0);
}

TEST(Metrics, TurnoutAndResult) {
  const auto m = compute_metrics(station("a", 1000, 600, 590, 300));
  EXPECT_DOUBLE_EQ(m.turnout.percent(), 60.0);
  ASSERT_TRUE(m.result);
  EXPECT_NEAR(m.result->percent(), 50.847457627, 1e-8);
}

TEST(Metrics, NoCastMeansNoResult) {
  EXPECT_FALSE(compute_metrics(station("a", 1000, 0, 0, 0)).result);
}

TEST(Metrics, ZeroRegisteredIsDomainError) {
  EXPECT_THROW(compute_metrics(station("a", 0, 0, 0, 0)), DomainError);
}

TEST(Consistency, Ordering) {
  EXPECT_TRUE(counts_consistent({10, 8, 7, 3}));
  EXPECT_FALSE(counts_consistent({10, 11, 7, 3}));
  EXPECT_FALSE(counts_consistent({10, 8, 9, 3}));
  EXPECT_FALSE(counts_consistent({10, 8, 7, 8}));
  EXPECT_FALSE(counts_consistent({10, 8, 7, -1}));
}

TEST(Filters, ReasonPrecedence) {
  const FilterPolicy p;
  EXPECT_EQ(exclusion_reason({0, 0, 0, 0}, p), ExclusionReason::invalid_counts);
  EXPECT_EQ(exclusion_reason({50, 60, 0, 0}, p), ExclusionReason::invalid_counts);
  EXPECT_EQ(exclusion_reason({99, 99, 99, 99}, p), ExclusionReason::too_small);
  EXPECT_EQ(exclusion_reason({1000, 995, 995, 995}, p), ExclusionReason::over_max_turnout);
  EXPECT_EQ(exclusion_reason({1000, 600, 600, 595}, p), ExclusionReason::over_max_result);
  EXPECT_EQ(exclusion_reason({1000, 0, 0, 0}, p), ExclusionReason::undefined_result);
  EXPECT_EQ(exclusion_reason({1000, 990, 600, 594}, p), std::nullopt);
  EXPECT_EQ(exclusion_reason({100, 50, 50, 20}, p), std::nullopt);
}

TEST(Filters, KeepsSurvivorsAndLogsTheRest) {
  const ElectionDataset ds("x", {station("a", 1000, 600, 600, 300), station("b", 80, 40, 40, 20),
                                 station("c", 1000, 1000, 1000, 500)});
  const auto f = apply_filters(ds);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.stations()[0].station_id, "a");
  ASSERT_EQ(f.filter_log().size(), 2u);
  EXPECT_EQ(f.filter_log()[0], (FilterLogEntry{"b", ExclusionReason::too_small}));
  EXPECT_EQ(f.filter_log()[1], (FilterLogEntry{"c", ExclusionReason::over_max_turnout}));
}

TEST(Filters, Idempotent) {
  const ElectionDataset ds("x", {station("a", 1000, 600, 600, 300), station("b", 80, 40, 40, 20)});
  const auto once = apply_filters(ds);
  EXPECT_EQ(apply_filters(once), once);
}

TEST(Dataset, DuplicateIdsRejected) {
  EXPECT_THROW(ElectionDataset("x", {station("a", 100, 1, 1, 1), station("a", 100, 1, 1, 1)}), DomainError);
}

TEST(Dataset, RegionsAndTotals) {
  const ElectionDataset ds("x", {station("a", 100, 50, 40, 20, "B"), station("b", 200, 150, 140, 70, "A"),
                                 station("c", 300, 250, 240, 120, "B")});
  EXPECT_EQ(ds.region_codes(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(ds.totals(), (StationCounts{600, 450, 420, 210}));
}

}  // namespace
}  // namespace heaping
