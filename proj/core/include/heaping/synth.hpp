#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heaping/model.hpp"
#include "heaping/shape.hpp"

namespace heaping {

struct FixedSize {
  Count voters = 1000;
};

/// Log-normal station sizes, redrawn until they fall in [min, max].
struct LogNormalSize {
  double median = 800.0;
  double sigma = 0.5;
  Count min = 100;
  Count max = 3000;
};

using SizeDistribution = std::variant<FixedSize, LogNormalSize>;

struct FixedProbability {
  double p = 0.5;
};

struct BetaProbability {
  double a = 1.0;
  double b = 1.0;
};

using ProbabilityField = std::variant<FixedProbability, BetaProbability>;

struct GeneratorConfig {
  std::string label = "synthetic";
  std::size_t n_stations = 0;
  SizeDistribution size = FixedSize{};
  ProbabilityField turnout = BetaProbability{6.0, 3.0};
  ProbabilityField result = BetaProbability{6.0, 4.0};
  std::size_t regions = 1;
  /// Chance that a given ballot is not cast (taken away).
  double ballot_loss = 0.0;
};

struct TrueProbabilities {
  double turnout = 0.0;
  double result = 0.0;
};

struct SyntheticElection {
  ElectionDataset dataset;
  std::vector<TrueProbabilities> truth;  // parallel to dataset.stations()
  std::vector<std::string> warnings;
};

/// Every station is a fair binomial election around its own true
/// probabilities: G ~ Binom(V, p_t), B = G - Binom(G, loss), L ~ Binom(B, p_r).
/// Station i belongs to region i % regions.
SyntheticElection generate(const GeneratorConfig& config, std::uint64_t seed, unsigned workers = 0);

enum class FraudMechanism { integer_rounding, five_multiple_rounding, ballot_stuffing, extreme_cluster };
enum class TargetSide { just_above, nearest };
enum class FraudMetric { turnout, result, either, both };
enum class InjectionStatus { modified, skipped_unreachable, skipped_no_target };

std::string_view to_string(FraudMechanism mechanism);
std::string_view to_string(InjectionStatus status);
FraudMechanism parse_fraud_mechanism(std::string_view text);

/// Integer percentages a rounding fraud aims for, with relative weights.
struct Palette {
  std::vector<std::pair<int, double>> entries;  // ascending integers

  /// 70..99, multiples of five weighted 3x.
  static Palette appealing();
  /// 70, 75, ..., 95.
  static Palette multiples_of_five();
};

struct FraudSpec {
  FraudMechanism mechanism = FraudMechanism::integer_rounding;
  double affected_fraction = 0.0;
  TargetSide target_side = TargetSide::just_above;
  /// Only stations from these regions are eligible.
  std::optional<std::set<std::string>> region_concentration;
  FraudMetric metric = FraudMetric::either;
  /// Defaults to appealing() or multiples_of_five() by mechanism.
  std::optional<Palette> palette;
  /// Rounding frauds push a percentage up by at most this many points.
  double max_shift = 5.0;
  /// Prefer a numerator not ending in 0 when the window still allows it.
  bool avoid_round_counts = true;
  /// ballot_stuffing: at most this share of abstainers is stuffed for the leader.
  double stuffing_share = 0.3;
  /// extreme_cluster: turnout and result are pushed into [floor, 100%].
  double extreme_floor = 0.95;
};

struct InjectionLogEntry {
  std::string station_id;
  InjectionStatus status = InjectionStatus::modified;
  std::optional<Metric> metric;  // rounding mechanisms with a single metric
  std::optional<int> target;     // target integer percentage
  StationCounts before;
  StationCounts after;
};

struct FraudResult {
  ElectionDataset dataset;
  std::vector<InjectionLogEntry> log;
  std::size_t requested = 0;
  std::size_t modified = 0;
};

/// Numerator that puts numerator/denominator*100 in [target, target + 0.05]
/// (just_above) or within 0.05 of target (nearest); nullopt when the
/// denominator is too coarse. With avoid_round, a numerator ending in 0 is
/// nudged by one if the result stays in the window.
std::optional<Count> rounded_numerator(Count denominator, int target, TargetSide side,
                                       bool avoid_round);

/// Picks round(affected_fraction * n) stations by seeded shuffle and applies
/// the mechanism; a station the mechanism cannot reach is logged as skipped
/// and the next one in the shuffle takes its place.
FraudResult inject_fraud(const ElectionDataset& dataset, const FraudSpec& spec, std::uint64_t seed);

}  // namespace heaping
