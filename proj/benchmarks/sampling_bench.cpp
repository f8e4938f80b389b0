#include <benchmark/benchmark.h>

#include "heaping/distributions.hpp"
#include "heaping/sampling.hpp"

namespace {

using heaping::Count;

void BM_Binomial(benchmark::State& state) {
  const Count n = state.range(0);
  const heaping::BinomialSampler sampler(n, 0.62);
  heaping::RandomStream stream(1, heaping::StreamTag::turnout, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sampler(stream));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Binomial)->Arg(20)->Arg(200)->Arg(2000)->Arg(20000);

void BM_CountSampler(benchmark::State& state) {
  const auto model = state.range(0) == 0   ? heaping::NullModel::binomial()
                     : state.range(0) == 1 ? heaping::NullModel::beta_binomial()
                                           : heaping::NullModel::clustered(5);
  const heaping::CountSampler sampler(1000, 640, model);
  heaping::RandomStream stream(2, heaping::StreamTag::turnout, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sampler(stream));
  state.SetLabel(model.to_string());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CountSampler)->DenseRange(0, 2);

}  // namespace
