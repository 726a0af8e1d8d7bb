// Serial vs OpenMP kernels: population fitness and batch scoring.

#include <benchmark/benchmark.h>

#include "innov/genome.hpp"
#include "innov/kernels.hpp"
#include "innov/sources.hpp"

namespace {

using namespace innov;

struct FitnessFixture {
  SearchPattern pattern;
  OfflineCorpusSource source;
  std::vector<Genotype> population;
};

const FitnessFixture& fitness_fixture() {
  static const FitnessFixture fx = [] {
    SyntheticSpec spec;
    spec.terms_per_object = 12;
    spec.docs_per_year = 200;
    spec.planted_objects = 1;
    spec.common_objects = 0;
    const auto data = synthetic_source(spec);
    Rng rng(1);
    GAConfig cfg;
    cfg.population_size = 256;
    const auto& pattern = data.objects.front().pattern;
    return FitnessFixture{pattern, build_index(data.corpus), init_population(pattern, cfg, rng)};
  }();
  return fx;
}

std::vector<MeasurementBatch> make_batches(std::size_t n) {
  Rng rng(2);
  std::vector<MeasurementBatch> out;
  for (std::size_t i = 0; i < n; ++i) {
    MeasurementBatch b{"s", "2017", {}, 1 + rng.below(10000), rng.uniform(1.0, 1e4)};
    for (int k = 0; k < 50; ++k) b.queries.push_back({"q", rng.below(b.marker_hits + 1), rng.uniform(0.0, b.marker_frequency)});
    out.push_back(std::move(b));
  }
  return out;
}

void BM_FitnessSerial(benchmark::State& state) {
  const auto& fx = fitness_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::evaluate_fitness_serial(fx.population, fx.pattern, fx.source, 20));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.population.size()));
}

void BM_FitnessParallel(benchmark::State& state) {
  const auto& fx = fitness_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::evaluate_fitness_parallel(fx.population, fx.pattern, fx.source, 20));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.population.size()));
  state.counters["threads"] = kernels::max_threads();
}

void BM_ScoreSerial(benchmark::State& state) {
  const auto batches = make_batches(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::score_batches_serial(batches));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScoreParallel(benchmark::State& state) {
  const auto batches = make_batches(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::score_batches_parallel(batches));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = kernels::max_threads();
}

}  // namespace

BENCHMARK(BM_FitnessSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitnessParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreSerial)->Arg(1000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ScoreParallel)->Arg(1000)->Arg(20000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
