#include "heaping/simulation.hpp"

#include "heaping/errors.hpp"

namespace heaping {

NullSimulator::NullSimulator(const ElectionDataset& dataset, const NullModel& model,
                             std::uint64_t master_seed)
    : model_(model), master_seed_(master_seed) {
  observed_.reserve(dataset.size());
  turnout_.reserve(dataset.size());
  result_.reserve(dataset.size());
  for (const auto& s : dataset.stations()) {
    const auto& c = s.counts;
    if (c.registered < 1 || c.given > c.registered || c.leader > c.cast) {
      throw DomainError("station '" + s.station_id + "' cannot be resampled; filter the dataset first");
    }
    observed_.push_back(c);
    turnout_.emplace_back(c.registered, c.given, model);
    result_.emplace_back(c.cast, c.leader, model);
  }
}

void NullSimulator::simulate(std::uint64_t iteration, std::span<StationCounts> out) const {
  if (out.size() != observed_.size()) throw ParameterError("simulation buffer size mismatch");
  for (std::size_t i = 0; i < observed_.size(); ++i) {
    const auto& c = observed_[i];
    StationCounts& sim = out[i];
    sim.registered = c.registered;
    sim.cast = c.cast;
    auto turnout_stream = make_stream({master_seed_, iteration, i, MetricTag::turnout});
    sim.given = turnout_[i](turnout_stream);
    if (c.cast > 0) {
      auto result_stream = make_stream({master_seed_, iteration, i, MetricTag::result});
      sim.leader = result_[i](result_stream);
    } else {
      sim.leader = 0;
    }
  }
}

}  // namespace heaping
