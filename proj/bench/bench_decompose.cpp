// OpenMP kernels against their serial references on planted data.
//   bench_decompose --benchmark_filter=Batch
#include <benchmark/benchmark.h>

#include <vector>

#include "toepdecomp/decomposition.hpp"
#include "toepdecomp/oracle.hpp"

namespace td = toepdecomp;

namespace {

td::AmplitudeVector planted(int m, int n, std::uint64_t seed) {
  td::oracle::SplitMix64 rng(seed);
  const auto signs = td::oracle::mixed_signs(m, rng);
  return td::oracle::synthesize_instance(m, n, signs, seed).c;
}

std::vector<td::AmplitudeVector> planted_batch(int count, int n) {
  std::vector<td::AmplitudeVector> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(planted(2 + k % 5, n, 500 + k));
  return out;
}

// All candidates of one input; the range argument is n.
void BM_DecomposeAll(benchmark::State& state) {
  const auto c = planted(6, static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(td::decompose_all(c, td::Mode::all()));
}

void BM_DecomposeAllSerial(benchmark::State& state) {
  const auto c = planted(6, static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(td::decompose_all_serial(c, td::Mode::all()));
}

// The range argument is the batch size at n = 12.
void BM_DecomposeBatch(benchmark::State& state) {
  const auto inputs = planted_batch(static_cast<int>(state.range(0)), 12);
  for (auto _ : state) benchmark::DoNotOptimize(td::decompose_batch(inputs, td::Mode::all()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DecomposeBatchSerial(benchmark::State& state) {
  const auto inputs = planted_batch(static_cast<int>(state.range(0)), 12);
  for (auto _ : state) benchmark::DoNotOptimize(td::decompose_batch_serial(inputs, td::Mode::all()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_DecomposeAll)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DecomposeAllSerial)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DecomposeBatch)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecomposeBatchSerial)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
