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

#include "autocompose/session.hpp"
#include "fixture.hpp"

using namespace autocompose;

static void BM_PrefixMatch(benchmark::State& state) {
  const auto& d = bench::desk();
  const EnsembleModel model(d.global, EnsembleConfig{});
  const session::EnsemblePredictor predictor(model, d.user);
  const auto s = session::state_from_text("what is the ");
  const auto boundary = session::on_word_boundary(s, predictor);
  const std::string typed = boundary.cache.candidates.empty()
                                ? std::string("m")
                                : boundary.cache.candidates.front().tokens.front().substr(0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(session::prefix_match(boundary.cache, typed));
}
BENCHMARK(BM_PrefixMatch);

static void BM_WordBoundary(benchmark::State& state) {
  const auto& d = bench::desk();
  const EnsembleModel model(d.global, EnsembleConfig{});
  const session::EnsemblePredictor predictor(model, d.user);
  const auto s = session::state_from_text("what is the ");
  for (auto _ : state) benchmark::DoNotOptimize(session::on_word_boundary(s, predictor));
}
BENCHMARK(BM_WordBoundary);

// A cache miss that falls through rematch to the character model.
static void BM_CascadeMiss(benchmark::State& state) {
  const auto& d = bench::desk();
  const EnsembleModel model(d.global, EnsembleConfig{});
  const session::EnsemblePredictor predictor(model, d.user);
  const session::CharCompleter completer(*d.chars);
  auto s = session::state_from_text("what is the qz");
  s.cache = session::SuggestionCache{session::anchor_tokens(s.anchor_text()), {}, 0};
  for (auto _ : state) benchmark::DoNotOptimize(session::on_char(s, predictor, &completer));
}
BENCHMARK(BM_CascadeMiss);

static void BM_TypeNote(benchmark::State& state) {
  const auto& d = bench::desk();
  const EnsembleModel model(d.global, EnsembleConfig{});
  const session::EnsemblePredictor predictor(model, d.user);
  const session::CharCompleter completer(*d.chars);
  const std::string note = "I will send the documents to you tomorrow morning";
  for (auto _ : state) {
    session::TypingSession typing(predictor, &completer);
    for (char c : note) benchmark::DoNotOptimize(typing.type(std::string(1, c)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * note.size()));
}
BENCHMARK(BM_TypeNote)->Unit(benchmark::kMicrosecond);
