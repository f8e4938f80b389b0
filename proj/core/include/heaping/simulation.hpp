#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "heaping/model.hpp"
#include "heaping/parallel.hpp"
#include "heaping/sampling.hpp"

namespace heaping {

/// Per-station samplers for one dataset under one null model. Iteration i
/// always produces the same simulated counts for station j, whatever thread
/// computes it; every analysis that shares (dataset, model, seed) therefore
/// sees the same Monte Carlo elections.
class NullSimulator {
 public:
  NullSimulator(const ElectionDataset& dataset, const NullModel& model, std::uint64_t master_seed);

  std::size_t station_count() const { return observed_.size(); }
  std::span<const StationCounts> observed() const { return observed_; }
  const NullModel& model() const { return model_; }
  std::uint64_t master_seed() const { return master_seed_; }

  /// Writes one simulated election: registered and cast are copied, given
  /// and leader are redrawn. Stations without cast ballots keep leader = 0.
  void simulate(std::uint64_t iteration, std::span<StationCounts> out) const;

 private:
  std::vector<StationCounts> observed_;
  std::vector<CountSampler> turnout_;
  std::vector<CountSampler> result_;
  NullModel model_;
  std::uint64_t master_seed_;
};

/// Folds body(iteration, simulated_counts, acc) over all iterations with an
/// ordered, worker-count-independent reduction.
template <class Acc, class Body, class Merge>
Acc reduce_iterations(const NullSimulator& sim, std::uint64_t iterations, unsigned workers,
                      const Acc& init, Body body, Merge merge) {
  constexpr std::size_t kChunk = 4;
  return ordered_reduce(
      static_cast<std::size_t>(iterations), kChunk, workers, init,
      [&](std::size_t iteration, Acc& acc) {
        thread_local std::vector<StationCounts> scratch;
        scratch.resize(sim.station_count());
        sim.simulate(iteration, scratch);
        body(static_cast<std::uint64_t>(iteration), std::span<const StationCounts>(scratch), acc);
      },
      merge);
}

}  // namespace heaping
