#include <benchmark/benchmark.h>

#include "latent_order/batch.hpp"
#include "latent_order/verify.hpp"

using namespace latent_order;

namespace {

std::vector<BatchItem> make_items(std::size_t count, std::size_t size) {
  Rng rng(7);
  std::vector<BatchItem> items;
  for (std::size_t i = 0; i < count; ++i) {
    const Instance inst = random_instance(rng, size, size, 0.3);
    items.push_back({random_masked_logits(rng, inst), inst.m()});
  }
  return items;
}

void BM_Serial(benchmark::State& state) {
  const auto items = make_items(static_cast<std::size_t>(state.range(0)), 6);
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(solve_batch_serial(items, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OpenMP(benchmark::State& state) {
  const auto items = make_items(static_cast<std::size_t>(state.range(0)), 6);
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(solve_batch(items, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(16)->Arg(128)->UseRealTime();
BENCHMARK(BM_OpenMP)->Arg(16)->Arg(128)->UseRealTime();

BENCHMARK_MAIN();
