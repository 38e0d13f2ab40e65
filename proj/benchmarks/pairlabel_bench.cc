#include <benchmark/benchmark.h>

#include "pairlabel/active.h"
#include "pairlabel/datagen.h"
#include "pairlabel/knn.h"
#include "pairlabel/labeler.h"
#include "pairlabel/metrics.h"
#include "pairlabel/rng.h"
#include "pairlabel/sim_oracle.h"
#include "pairlabel/topt.h"

namespace pairlabel {
namespace {

void BM_SelectTopAmbiguous(benchmark::State& state) {
  const Dataset d = GenTwoGaussians({static_cast<std::size_t>(state.range(0)), 1});
  const SelectionParams params{static_cast<std::size_t>(state.range(1)), 1};
  SimulatedOracle oracle(NoiseSpec{0.1, 0.1}, Rng(2));
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SelectTopAmbiguous(d, params, oracle, rng));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SelectTopAmbiguous)
    ->ArgsProduct({{1000, 10000, 100000}, {3, 35}})
    ->Unit(benchmark::kMicrosecond);

void BM_InferLabels(benchmark::State& state) {
  const Dataset d = GenTwoGaussians({static_cast<std::size_t>(state.range(0)), 1});
  const LabelingParams params{static_cast<std::size_t>(state.range(1)), 1,
                              DelegationPolicy::kRandomLabels, std::nullopt};
  SimulatedOracle oracle(NoiseSpec{0.4, 0.4}, Rng(2));
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(InferLabels(d, params, oracle, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InferLabels)
    ->ArgsProduct({{2000, 20000}, {10, 35}})
    ->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  const Dataset train = GenTwoGaussians({static_cast<std::size_t>(state.range(0)), 1});
  const Dataset test = GenTwoGaussians({500, 2});
  std::vector<Sign> labels;
  for (const auto& p : train.points()) labels.push_back(*p.true_label);
  const KnnModel model = KnnModel::FromDataset(train, labels, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Evaluate(model, test));
  }
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_KnnPredict)->Arg(1600)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_DbalTrial(benchmark::State& state) {
  ActiveConfig config;
  config.hypotheses = LinearGrid(static_cast<std::size_t>(state.range(0)));
  config.labeling = LabelingParams{3, 1, DelegationPolicy::kRandomLabels, std::nullopt};
  const Dataset test = GenTwoGaussians({2000, 9});
  SimulatedOracle oracle(NoiseSpec{0.1, 0.1}, Rng(2));
  TwoGaussianSource source;
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunDbal(config, oracle, source, test, rng));
  }
}
BENCHMARK(BM_DbalTrial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pairlabel

BENCHMARK_MAIN();
