#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "heaping/distributions.hpp"
#include "heaping/model.hpp"
#include "heaping/rng.hpp"

namespace heaping {

enum class NullModelKind { binomial, beta_binomial, clustered };

/// Generative model of fair voting used to resample one station's count.
struct NullModel {
  NullModelKind kind = NullModelKind::binomial;
  int cluster_size = 1;  // clustered only, 1..10

  static NullModel binomial() { return {}; }
  static NullModel beta_binomial() { return {NullModelKind::beta_binomial, 1}; }
  static NullModel clustered(int cluster_size);

  /// "binomial", "beta-binomial" or "clustered:<c>".
  static NullModel parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const NullModel&) const = default;
};

enum class MetricTag : std::uint32_t { turnout = 0, result = 1 };

/// Address of one draw. The tuple fully determines the random stream.
struct SimSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t iteration_index = 0;
  std::uint64_t station_index = 0;
  MetricTag metric_tag = MetricTag::turnout;
};

RandomStream make_stream(const SimSeed& seed);

/// Resamples `successes` out of `trials` under a null model. Binomial and
/// clustered setups are precomputed; beta-binomial draws a fresh success
/// probability from Beta(successes+1, trials-successes+1) on every call.
///
/// Clustered with cluster size c: K ~ Binom(trials / c, p) whole clusters,
/// plus R' ~ Binom(trials % c, p) leftover voters; the draw is c*K + R'.
class CountSampler {
 public:
  CountSampler() = default;
  CountSampler(Count trials, Count successes, const NullModel& model);

  Count operator()(RandomStream& stream) const;

 private:
  NullModelKind kind_ = NullModelKind::binomial;
  Count trials_ = 0;
  Count successes_ = 0;
  int cluster_size_ = 1;
  BinomialSampler main_;
  BinomialSampler remainder_;
};

/// Simulated given-ballot count G^MC for the station.
/// Throws DomainError when registered < 1 or given > registered.
Count sample_turnout(const StationRecord& record, const NullModel& model, const SimSeed& seed);

/// Simulated leader count L^MC over the station's own cast ballots.
/// Throws DomainError when cast == 0 or leader > cast.
Count sample_result(const StationRecord& record, const NullModel& model, const SimSeed& seed);

}  // namespace heaping
