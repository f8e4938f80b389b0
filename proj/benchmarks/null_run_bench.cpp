#include <benchmark/benchmark.h>

#include "heaping/anomaly.hpp"
#include "heaping/shape.hpp"
#include "heaping/synth.hpp"

namespace {

const heaping::ElectionDataset& dataset() {
  static const heaping::ElectionDataset d = [] {
    heaping::GeneratorConfig g;
    g.n_stations = 20'000;
    g.size = heaping::LogNormalSize{};
    return heaping::apply_filters(heaping::generate(g, 1).dataset);
  }();
  return d;
}

void BM_NullRun(benchmark::State& state) {
  const auto model = state.range(0) == 0 ? heaping::NullModel::binomial() : heaping::NullModel::beta_binomial();
  for (auto _ : state) {
    auto r = heaping::run_null(dataset(), heaping::StatisticDef{}, heaping::WindowSpec{}, model, 100, 7);
    benchmark::DoNotOptimize(r.mc_mean);
  }
  state.SetLabel(model.to_string());
  state.SetItemsProcessed(state.iterations() * 100 * static_cast<std::int64_t>(dataset().size()));
}
BENCHMARK(BM_NullRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Histograms(benchmark::State& state) {
  const std::vector<heaping::Metric> metrics = {heaping::Metric::turnout, heaping::Metric::result};
  for (auto _ : state) {
    auto e = heaping::simulate_histograms(dataset(), metrics, heaping::NullModel::binomial(), 100, 7);
    benchmark::DoNotOptimize(e.front().row(0).data());
  }
}
BENCHMARK(BM_Histograms)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
