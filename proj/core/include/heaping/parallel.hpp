#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace heaping {

/// 0 means "use std::thread::hardware_concurrency()".
unsigned resolve_workers(unsigned requested);

/// Runs task(i) for every i in [0, count) on up to `workers` threads.
/// Exceptions thrown by tasks are rethrown on the calling thread (the first
/// one by index wins).
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

/// Splits [0, count) into fixed-size chunks that depend only on `count` and
/// `chunk`, folds each chunk in index order into its own accumulator, then
/// merges the chunk accumulators in chunk order. The result is identical
/// for every worker count, including for floating-point accumulators.
template <class Acc, class Body, class Merge>
Acc ordered_reduce(std::size_t count, std::size_t chunk, unsigned workers, const Acc& init, Body body,
                   Merge merge) {
  if (chunk == 0) chunk = 1;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<Acc> partial(chunks, init);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = begin + chunk < count ? begin + chunk : count;
    for (std::size_t i = begin; i < end; ++i) body(i, partial[c]);
  });
  Acc total = init;
  for (auto& p : partial) merge(total, p);
  return total;
}

}  // namespace heaping
