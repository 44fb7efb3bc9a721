// Copyright 2026 The autocompose Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "autocompose/decoder.hpp"
#include "fixture.hpp"

using namespace autocompose;

static void BM_MarkovTrain(benchmark::State& state) {
  const auto& d = bench::desk();
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(MarkovModel::train(d.sequences, k));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.sequences.size()));
}
BENCHMARK(BM_MarkovTrain)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_NextDistribution(benchmark::State& state) {
  const auto& d = bench::desk();
  const auto& seq = d.sequences.front();
  const std::vector<std::string> ctx(seq.begin() + 1, seq.begin() + 3);
  for (auto _ : state) benchmark::DoNotOptimize(d.global->next_distribution(ctx));
}
BENCHMARK(BM_NextDistribution);

static void BM_TopN(benchmark::State& state) {
  const auto& d = bench::desk();
  const auto& seq = d.sequences.front();
  const std::vector<std::string> prefix(seq.begin(), seq.begin() + 3);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decoder::top_n(*d.global, prefix, n));
}
BENCHMARK(BM_TopN)->Arg(1)->Arg(3)->Arg(5);

static void BM_EnsembleSuggest(benchmark::State& state) {
  const auto& d = bench::desk();
  EnsembleConfig config;
  config.alpha_ensemble = 0.5;
  const EnsembleModel model(d.global, config);
  const auto& seq = d.sequences.front();
  const std::vector<std::string> prefix(seq.begin(), seq.begin() + 3);
  for (auto _ : state) benchmark::DoNotOptimize(model.suggest_after_word(prefix, d.user));
}
BENCHMARK(BM_EnsembleSuggest);

static void BM_CompleteWord(benchmark::State& state) {
  const auto& d = bench::desk();
  for (auto _ : state) benchmark::DoNotOptimize(d.chars->complete_word("what is the ", "ma"));
}
BENCHMARK(BM_CompleteWord);

static void BM_Serialize(benchmark::State& state) {
  const auto& d = bench::desk();
  for (auto _ : state) benchmark::DoNotOptimize(serialize(*d.global));
}
BENCHMARK(BM_Serialize)->Unit(benchmark::kMillisecond);

static void BM_Deserialize(benchmark::State& state) {
  const std::string bytes = serialize(*bench::desk().global);
  for (auto _ : state) benchmark::DoNotOptimize(deserialize(bytes));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_Deserialize)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
