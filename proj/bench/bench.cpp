// Serial reference versus OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "mcpc/rpg.hpp"
#include "mcpc/search.hpp"
#include "mcpc/selvage.hpp"
#include "mcpc/separation.hpp"

using namespace mcpc;

namespace {

// Unit words of a large selvage code: a big prefix code with short words.
const Codebook& big_code() {
  static const Codebook cb = selvage_code(ChannelSpec({6, 5, 4, 3})).full;
  return cb;
}

void BM_PrefixSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(is_prefix_code_serial(big_code()));
}
void BM_PrefixParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(is_prefix_code(big_code()));
}
void BM_OverlapSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(overlap_free_serial(big_code()));
}
void BM_OverlapParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(overlap_free(big_code()));
}

const Codebook& big_core() {
  static const Codebook cb = selvage_core(ChannelSpec({6, 6, 5, 5, 4, 4}));
  return cb;
}
void BM_UnitWordsSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(selvage_unit_words_serial(big_core()));
}
void BM_UnitWordsParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(selvage_unit_words(big_core()));
}

const ChannelSpec& sep_spec() {
  static const ChannelSpec spec({12, 18, 20, 30, 42, 45, 50, 63, 70, 77, 99, 105});
  return spec;
}
void BM_SeparationSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(find_t_separation_serial(sep_spec(), 4));
}
void BM_SeparationParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(find_t_separation(sep_spec(), 4));
}

const ProbMultiset& search_probs() {
  static const ProbMultiset p = selvage_code(ChannelSpec({6, 3, 2})).spa;
  return p;
}
void BM_SearchSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(optimal_tree_code_serial(search_probs(), ChannelSpec({6, 3, 2})));
}
void BM_SearchParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(optimal_tree_code(search_probs(), ChannelSpec({6, 3, 2})));
}

}  // namespace

BENCHMARK(BM_PrefixSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PrefixParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OverlapSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OverlapParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_UnitWordsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_UnitWordsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SeparationSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SeparationParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SearchSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SearchParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
