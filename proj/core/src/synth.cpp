#include "heaping/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heaping/distributions.hpp"
#include "heaping/errors.hpp"
#include "heaping/parallel.hpp"
#include "heaping/rng.hpp"

namespace heaping {

namespace {

std::string padded(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

std::size_t digits_for(std::size_t n) {
  std::size_t d = 1;
  for (std::size_t v = n > 0 ? n - 1 : 0; v >= 10; v /= 10) ++d;
  return d;
}

void validate_probability(const ProbabilityField& field, const char* name) {
  if (const auto* f = std::get_if<FixedProbability>(&field)) {
    if (!(f->p >= 0.0 && f->p <= 1.0)) throw ParameterError(std::string(name) + " probability must lie in [0, 1]");
  } else {
    const auto& b = std::get<BetaProbability>(field);
    if (!(b.a > 0.0 && b.b > 0.0)) throw ParameterError(std::string(name) + " Beta parameters must be positive");
  }
}

double draw_probability(const ProbabilityField& field, RandomStream& stream) {
  if (const auto* f = std::get_if<FixedProbability>(&field)) return f->p;
  const auto& b = std::get<BetaProbability>(field);
  return beta_variate(stream, b.a, b.b);
}

Count draw_size(const SizeDistribution& size, RandomStream& stream) {
  if (const auto* f = std::get_if<FixedSize>(&size)) return f->voters;
  const auto& ln = std::get<LogNormalSize>(size);
  const double mu = std::log(ln.median);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const auto v = static_cast<Count>(std::llround(std::exp(mu + ln.sigma * standard_normal(stream))));
    if (v >= ln.min && v <= ln.max) return v;
  }
  throw ParameterError("log-normal station sizes almost never fall inside the truncation range");
}

void validate(const GeneratorConfig& c) {
  if (const auto* f = std::get_if<FixedSize>(&c.size)) {
    if (f->voters < 1) throw ParameterError("fixed station size must be positive");
  } else {
    const auto& ln = std::get<LogNormalSize>(c.size);
    if (!(ln.median > 0.0) || !(ln.sigma >= 0.0) || ln.min < 1 || ln.min > ln.max) {
      throw ParameterError("invalid log-normal size distribution");
    }
  }
  validate_probability(c.turnout, "turnout");
  validate_probability(c.result, "result");
  if (c.regions == 0) throw ParameterError("at least one region is required");
  if (!(c.ballot_loss >= 0.0 && c.ballot_loss <= 1.0)) throw ParameterError("ballot_loss must lie in [0, 1]");
}

// 2000 * g <= (20 * target + 1) * den  <=>  g / den * 100 <= target + 0.05
bool within_just_above(Count g, Count den, int target) {
  return 100 * g >= static_cast<Count>(target) * den && 2000 * g <= (20 * static_cast<Count>(target) + 1) * den;
}

bool within_nearest(Count g, Count den, int target) {
  const Count diff = 2000 * g - 20 * static_cast<Count>(target) * den;
  return diff <= den && -diff <= den;
}

struct Outcome {
  InjectionStatus status = InjectionStatus::modified;
  std::optional<Metric> metric;
  std::optional<int> target;
};

Outcome apply_rounding(StationCounts& c, Metric metric, const FraudSpec& spec, const Palette& palette,
                       RandomStream& stream) {
  const Count den = metric == Metric::turnout ? c.registered : c.cast;
  const Count num = metric == Metric::turnout ? c.given : c.leader;
  Outcome out{InjectionStatus::skipped_no_target, metric, std::nullopt};
  if (den <= 0) return out;
  const double v = 100.0 * static_cast<double>(num) / static_cast<double>(den);

  std::vector<std::pair<int, double>> eligible;
  double max_weight = 0.0;
  for (const auto& [k, w] : palette.entries) {
    if (w <= 0.0 || static_cast<double>(k) > v + spec.max_shift) continue;
    if (spec.target_side == TargetSide::just_above) {
      if ((static_cast<Count>(k) * den + 99) / 100 < num) continue;
    } else if (static_cast<double>(k) < v - 0.5) {
      continue;
    }
    eligible.emplace_back(k, w);
    max_weight = std::max(max_weight, w);
  }
  if (eligible.empty()) return out;

  // Nearer targets get the first chance; heavier ones are accepted more often.
  int target = -1;
  for (const auto& [k, w] : eligible) {
    if (stream.uniform() < w / max_weight) {
      target = k;
      break;
    }
  }
  if (target < 0) {
    target = std::find_if(eligible.begin(), eligible.end(), [&](const auto& e) { return e.second == max_weight; })->first;
  }
  out.target = target;

  const auto g = rounded_numerator(den, target, spec.target_side, spec.avoid_round_counts);
  out.status = InjectionStatus::skipped_unreachable;
  if (!g) return out;
  if (metric == Metric::turnout) {
    if (*g < c.cast || *g > c.registered) return out;
    c.given = *g;
  } else {
    if (*g > c.cast) return out;
    c.leader = *g;
  }
  out.status = InjectionStatus::modified;
  return out;
}

Outcome apply_stuffing(StationCounts& c, const FraudSpec& spec, RandomStream& stream) {
  const Count abstainers = c.registered - c.given;
  const auto extra = static_cast<Count>(std::floor(stream.uniform() * spec.stuffing_share * static_cast<double>(abstainers)));
  if (extra <= 0) return {InjectionStatus::skipped_unreachable, std::nullopt, std::nullopt};
  c.given += extra;
  c.cast += extra;
  c.leader += extra;
  return {};
}

Outcome apply_extreme(StationCounts& c, const FraudSpec& spec, RandomStream& stream) {
  const StationCounts before = c;
  const double span = 1.0 - spec.extreme_floor;
  const double t = spec.extreme_floor + span * stream.uniform();
  const Count given = std::max(c.given, static_cast<Count>(std::llround(t * static_cast<double>(c.registered))));
  c.cast += given - c.given;
  c.given = given;
  const double r = spec.extreme_floor + span * stream.uniform();
  c.leader = std::min(c.cast, std::max(c.leader, static_cast<Count>(std::llround(r * static_cast<double>(c.cast)))));
  if (c == before) return {InjectionStatus::skipped_unreachable, std::nullopt, std::nullopt};
  return {};
}

}  // namespace

SyntheticElection generate(const GeneratorConfig& config, std::uint64_t seed, unsigned workers) {
  validate(config);
  if (config.n_stations > 0xffffffffULL) throw ParameterError("too many stations");
  SyntheticElection out;
  if (const auto* f = std::get_if<FixedSize>(&config.size); f && f->voters < 100) {
    out.warnings.push_back("fixed station size " + std::to_string(f->voters) +
                           " is below 100; the default filter removes every station");
  }
  if (const auto* ln = std::get_if<LogNormalSize>(&config.size); ln && ln->min < 100) {
    out.warnings.push_back("station sizes below 100 are possible; the default filter removes those stations");
  }

  const std::size_t n = config.n_stations;
  const std::size_t id_width = std::max<std::size_t>(6, digits_for(n));
  const std::size_t region_width = std::max<std::size_t>(2, digits_for(config.regions));
  std::vector<StationRecord> stations(n);
  out.truth.resize(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RandomStream stream(seed, StreamTag::synth_station, static_cast<std::uint32_t>(i), 0);
    StationRecord& s = stations[i];
    const std::size_t region = i % config.regions;
    s.station_id = "S" + padded(i, id_width);
    s.region_code = "R" + padded(region, region_width);
    s.constituency_id = s.region_code + "-" + std::to_string(i / config.regions / 100);

    const Count voters = draw_size(config.size, stream);
    const double pt = draw_probability(config.turnout, stream);
    const double pr = draw_probability(config.result, stream);
    const Count given = binomial_variate(stream, voters, pt);
    const Count lost = config.ballot_loss > 0.0 ? binomial_variate(stream, given, config.ballot_loss) : 0;
    const Count cast = given - lost;
    s.counts = StationCounts{voters, given, cast, binomial_variate(stream, cast, pr)};
    out.truth[i] = TrueProbabilities{pt, pr};
  });
  out.dataset = ElectionDataset(config.label, std::move(stations));
  return out;
}

std::string_view to_string(FraudMechanism mechanism) {
  switch (mechanism) {
    case FraudMechanism::integer_rounding: return "integer_rounding";
    case FraudMechanism::five_multiple_rounding: return "five_multiple_rounding";
    case FraudMechanism::ballot_stuffing: return "ballot_stuffing";
    case FraudMechanism::extreme_cluster: return "extreme_cluster";
  }
  return "unknown";
}

std::string_view to_string(InjectionStatus status) {
  switch (status) {
    case InjectionStatus::modified: return "modified";
    case InjectionStatus::skipped_unreachable: return "skipped_unreachable";
    case InjectionStatus::skipped_no_target: return "skipped_no_target";
  }
  return "unknown";
}

FraudMechanism parse_fraud_mechanism(std::string_view text) {
  for (auto m : {FraudMechanism::integer_rounding, FraudMechanism::five_multiple_rounding,
                 FraudMechanism::ballot_stuffing, FraudMechanism::extreme_cluster}) {
    if (to_string(m) == text) return m;
  }
  throw ParameterError("unknown fraud mechanism '" + std::string(text) + "'");
}

Palette Palette::appealing() {
  Palette p;
  for (int k = 70; k <= 99; ++k) p.entries.emplace_back(k, k % 5 == 0 ? 3.0 : 1.0);
  return p;
}

Palette Palette::multiples_of_five() {
  Palette p;
  for (int k = 70; k <= 95; k += 5) p.entries.emplace_back(k, 1.0);
  return p;
}

std::optional<Count> rounded_numerator(Count denominator, int target, TargetSide side, bool avoid_round) {
  if (denominator <= 0) throw ParameterError("denominator must be positive");
  if (target < 0 || target > 100) throw ParameterError("target must lie in [0, 100]");
  const Count scaled = static_cast<Count>(target) * denominator;
  if (side == TargetSide::just_above) {
    const Count g = (scaled + 99) / 100;
    if (!within_just_above(g, denominator, target)) return std::nullopt;
    if (avoid_round && g % 10 == 0 && within_just_above(g + 1, denominator, target)) return g + 1;
    return g;
  }
  const Count g = (scaled + 50) / 100;
  if (!within_nearest(g, denominator, target)) return std::nullopt;
  if (avoid_round && g % 10 == 0) {
    if (within_nearest(g + 1, denominator, target) && g + 1 <= denominator) return g + 1;
    if (g > 0 && within_nearest(g - 1, denominator, target)) return g - 1;
  }
  return g;
}

FraudResult inject_fraud(const ElectionDataset& dataset, const FraudSpec& spec, std::uint64_t seed) {
  if (!(spec.affected_fraction >= 0.0 && spec.affected_fraction <= 1.0)) {
    throw ParameterError("affected_fraction must lie in [0, 1]");
  }
  if (!(spec.max_shift >= 0.0)) throw ParameterError("max_shift must be non-negative");
  if (!(spec.stuffing_share >= 0.0 && spec.stuffing_share <= 1.0)) throw ParameterError("stuffing_share must lie in [0, 1]");
  if (!(spec.extreme_floor >= 0.0 && spec.extreme_floor <= 1.0)) throw ParameterError("extreme_floor must lie in [0, 1]");
  if (dataset.size() > 0xffffffffULL) throw ParameterError("too many stations");

  const Palette palette = spec.palette ? *spec.palette
                          : spec.mechanism == FraudMechanism::five_multiple_rounding ? Palette::multiples_of_five()
                                                                                     : Palette::appealing();
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset.stations()[i];
    if (spec.region_concentration && !spec.region_concentration->contains(s.region_code)) continue;
    if (!counts_consistent(s.counts) || s.counts.registered <= 0) continue;
    pool.push_back(static_cast<std::uint32_t>(i));
  }

  FraudResult out;
  out.requested = static_cast<std::size_t>(std::llround(spec.affected_fraction * static_cast<double>(pool.size())));
  std::vector<StationRecord> stations = dataset.stations();
  if (out.requested > 0) {
    // Fisher-Yates on the eligible pool.
    RandomStream pick(seed, StreamTag::synth_selection, 0, 0);
    for (std::size_t i = pool.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(pick.next_u64() % i);
      std::swap(pool[i - 1], pool[j]);
    }
  }

  for (std::size_t p = 0; p < pool.size() && out.modified < out.requested; ++p) {
    const std::uint32_t index = pool[p];
    StationRecord& s = stations[index];
    RandomStream stream(seed, StreamTag::synth_fraud, index, 0);
    InjectionLogEntry entry;
    entry.station_id = s.station_id;
    entry.before = s.counts;
    StationCounts counts = s.counts;
    Outcome outcome;
    switch (spec.mechanism) {
      case FraudMechanism::integer_rounding:
      case FraudMechanism::five_multiple_rounding:
        if (spec.metric == FraudMetric::both) {
          const auto t = apply_rounding(counts, Metric::turnout, spec, palette, stream);
          const auto r = apply_rounding(counts, Metric::result, spec, palette, stream);
          outcome.status = t.status == InjectionStatus::modified || r.status == InjectionStatus::modified
                               ? InjectionStatus::modified
                               : t.status;
        } else {
          Metric metric = spec.metric == FraudMetric::result ? Metric::result : Metric::turnout;
          if (spec.metric == FraudMetric::either && stream.uniform() < 0.5) metric = Metric::result;
          outcome = apply_rounding(counts, metric, spec, palette, stream);
        }
        break;
      case FraudMechanism::ballot_stuffing: outcome = apply_stuffing(counts, spec, stream); break;
      case FraudMechanism::extreme_cluster: outcome = apply_extreme(counts, spec, stream); break;
    }
    entry.status = outcome.status;
    entry.metric = outcome.metric;
    entry.target = outcome.target;
    if (outcome.status == InjectionStatus::modified) {
      s.counts = counts;
      ++out.modified;
    }
    entry.after = s.counts;
    out.log.push_back(std::move(entry));
  }
  out.dataset = ElectionDataset(dataset.label(), std::move(stations), dataset.filter_log());
  return out;
}

}  // namespace heaping
