#include "heaping/sampling.hpp"

#include <charconv>
#include <limits>

#include "heaping/errors.hpp"

namespace heaping {

namespace {

std::uint32_t narrow_index(std::uint64_t value, const char* what) {
  if (value > std::numeric_limits<std::uint32_t>::max()) {
    throw ParameterError(std::string(what) + " index exceeds 32 bits");
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

NullModel NullModel::clustered(int cluster_size) {
  if (cluster_size < 1 || cluster_size > 10) {
    throw ParameterError("cluster size must be in 1..10");
  }
  return {NullModelKind::clustered, cluster_size};
}

NullModel NullModel::parse(std::string_view text) {
  if (text == "binomial") return binomial();
  if (text == "beta-binomial" || text == "beta_binomial") return beta_binomial();
  constexpr std::string_view prefix = "clustered:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    int size = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), size);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return clustered(size);
  }
  throw ParameterError("unknown null model '" + std::string(text) +
                       "' (expected binomial, beta-binomial or clustered:<c>)");
}

std::string NullModel::to_string() const {
  switch (kind) {
    case NullModelKind::binomial: return "binomial";
    case NullModelKind::beta_binomial: return "beta-binomial";
    case NullModelKind::clustered: return "clustered:" + std::to_string(cluster_size);
  }
  return "unknown";
}

RandomStream make_stream(const SimSeed& seed) {
  return RandomStream(seed.master_seed, static_cast<StreamTag>(seed.metric_tag),
                      narrow_index(seed.station_index, "station"),
                      narrow_index(seed.iteration_index, "iteration"));
}

CountSampler::CountSampler(Count trials, Count successes, const NullModel& model)
    : kind_(model.kind), trials_(trials), successes_(successes), cluster_size_(model.cluster_size) {
  if (trials < 0 || successes < 0 || successes > trials) {
    throw DomainError("resampled count outside [0, trials]");
  }
  const double p = trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  switch (kind_) {
    case NullModelKind::binomial:
      main_ = BinomialSampler(trials, p);
      break;
    case NullModelKind::beta_binomial:
      break;
    case NullModelKind::clustered:
      main_ = BinomialSampler(trials / cluster_size_, p);
      remainder_ = BinomialSampler(trials % cluster_size_, p);
      break;
  }
}

Count CountSampler::operator()(RandomStream& stream) const {
  switch (kind_) {
    case NullModelKind::binomial:
      return main_(stream);
    case NullModelKind::beta_binomial: {
      const double p = beta_variate(stream, static_cast<double>(successes_) + 1.0,
                                    static_cast<double>(trials_ - successes_) + 1.0);
      return binomial_variate(stream, trials_, p);
    }
    case NullModelKind::clustered:
      return cluster_size_ * main_(stream) + remainder_(stream);
  }
  return 0;
}

Count sample_turnout(const StationRecord& record, const NullModel& model, const SimSeed& seed) {
  const auto& c = record.counts;
  if (c.registered < 1) {
    throw DomainError("station '" + record.station_id + "' has no registered voters");
  }
  if (c.given > c.registered) {
    throw DomainError("station '" + record.station_id + "' has more given ballots than voters");
  }
  SimSeed s = seed;
  s.metric_tag = MetricTag::turnout;
  auto stream = make_stream(s);
  return CountSampler(c.registered, c.given, model)(stream);
}

Count sample_result(const StationRecord& record, const NullModel& model, const SimSeed& seed) {
  const auto& c = record.counts;
  if (c.cast < 1) {
    throw DomainError("station '" + record.station_id + "' has no cast ballots");
  }
  if (c.leader > c.cast) {
    throw DomainError("station '" + record.station_id + "' has more leader votes than cast ballots");
  }
  SimSeed s = seed;
  s.metric_tag = MetricTag::result;
  auto stream = make_stream(s);
  return CountSampler(c.cast, c.leader, model)(stream);
}

}  // namespace heaping
