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

#include <doctest.h>

#include <random>

#include "autocompose/corpus.hpp"
#include "autocompose/ensemble.hpp"
#include "autocompose/errors.hpp"

using namespace autocompose;
using Seq = std::vector<std::string>;

namespace {

std::shared_ptr<const MarkovModel> train(std::initializer_list<const char*> notes, int k = 2) {
  std::vector<Seq> seqs;
  for (const char* n : notes) seqs.push_back(corpus::prepare(n));
  return std::make_shared<const MarkovModel>(MarkovModel::train(seqs, k));
}

UserProfile profile(std::shared_ptr<const MarkovModel> local) {
  UserProfile p;
  p.user_id = "u";
  p.local = std::move(local);
  return p;
}

void check_same(const std::vector<Suggestion>& a, const std::vector<Suggestion>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].tokens == b[i].tokens);
    CHECK(a[i].raw_logprob == doctest::Approx(b[i].raw_logprob).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("combine_step") {
  const Distribution g({{"for", 0.9}, {"to", 0.1}});
  const Distribution l({{"for", 0.5}, {"uploading", 0.5}});
  const Distribution c = ensemble::combine_step(g, l, 0.6);
  CHECK(c.size() == 3);
  CHECK(c.probability("for") == doctest::Approx(0.74));
  CHECK(c.probability("to") == doctest::Approx(0.06));
  CHECK(c.probability("uploading") == doctest::Approx(0.2));
  CHECK(c.total() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(ensemble::combine_step(g, l, 1.0) == g);
  CHECK(ensemble::combine_step(g, l, 0.0) == l);
  CHECK(ensemble::combine_step(g, Distribution{}, 0.6) == g);
  CHECK(ensemble::combine_step(Distribution{}, l, 0.6) == l);
  CHECK(ensemble::combine_step(Distribution{}, Distribution{}, 0.6).empty());
  CHECK_THROWS_AS(ensemble::combine_step(g, l, 1.5), InvalidParameter);
  CHECK_THROWS_AS(ensemble::combine_step(g, l, -0.1), InvalidParameter);
}

TEST_CASE("combined probabilities are convex and normalized") {
  std::mt19937 rng(3);
  static const Seq symbols = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 500; ++trial) {
    auto random_dist = [&] {
      std::vector<Distribution::Entry> e;
      double total = 0.0;
      for (const std::string& s : symbols) {
        if (rng() % 2) continue;
        const double w = 1.0 + static_cast<double>(rng() % 100);
        e.push_back({s, w});
        total += w;
      }
      for (auto& x : e) x.probability /= total;
      return Distribution(std::move(e));
    };
    const Distribution g = random_dist();
    const Distribution l = random_dist();
    const double alpha = static_cast<double>(rng() % 101) / 100.0;
    const Distribution c = ensemble::combine_step(g, l, alpha);
    if (!c.empty()) CHECK(std::abs(c.total() - 1.0) < 1e-9);
    for (const auto& e : c) {
      const double pg = g.probability(e.symbol);
      const double pl = l.probability(e.symbol);
      if (!g.empty() && !l.empty()) {
        CHECK(e.probability >= std::min(pg, pl) - 1e-12);
        CHECK(e.probability <= std::max(pg, pl) + 1e-12);
      }
    }
  }
}

TEST_CASE("suggest_after_word prefers the weighted global branch") {
  const auto global = train({"thank you for the update"});
  const auto local = train({"thank you for uploading the documents"});
  EnsembleConfig config;
  const EnsembleModel model(global, config);
  const Seq prefix = corpus::tokenize_words("thank you for");
  const Seq ctx(prefix.begin(), prefix.end() - 1);
  const auto list = model.suggest_after_word(ctx, profile(local));
  REQUIRE(list.size() == 2);
  CHECK(list[0].tokens == Seq{"the", "update"});
  CHECK(list[0].raw_logprob == doctest::Approx(std::log(0.6)));
  CHECK(list[0].source == Source::ensemble);
  CHECK(list[0].attribution == Source::global);
  CHECK(list[1].tokens == Seq{"uploading", "the", "documents"});
  CHECK(list[1].attribution == Source::local);
  CHECK(list[0].gated == decoder::gate(list[0], config.threshold));
}

TEST_CASE("gated flags follow the threshold") {
  const auto global = train({"thank you for the update"});
  const auto local = train({"thank you for uploading the documents"});
  EnsembleConfig config;
  config.threshold = -0.6;
  const EnsembleModel model(global, config);
  const auto list = model.suggest_after_word(Seq{"<s>", "thank", "you", "for"}, profile(local));
  REQUIRE(list.size() == 2);
  CHECK(list[0].gated);
  CHECK_FALSE(list[1].gated);
}

TEST_CASE("degenerate alphas reduce to single models") {
  std::mt19937 rng(11);
  static const Seq words = {"alpha", "beta", "gamma", "delta", "eps"};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Seq> user_notes;
    std::vector<Seq> all_notes;
    for (int n = 0; n < 15; ++n) {
      Seq s{"<s>"};
      for (std::size_t i = 1 + rng() % 6; i > 0; --i) s.push_back(words[rng() % words.size()]);
      s.push_back("</s>");
      all_notes.push_back(s);
      if (n % 2 == 0) user_notes.push_back(s);
    }
    const auto global = std::make_shared<const MarkovModel>(MarkovModel::train(all_notes, 2));
    const auto local = std::make_shared<const MarkovModel>(MarkovModel::train(user_notes, 2));
    const Seq& src = user_notes[rng() % user_notes.size()];
    const Seq prefix(src.begin(), src.begin() + 1 + static_cast<long>(rng() % (src.size() - 1)));

    EnsembleConfig config;
    config.alpha_ensemble = 1.0;
    check_same(EnsembleModel(global, config).suggest_after_word(prefix, profile(local)),
               decoder::top_n(*global, prefix, config.top_n));
    config.alpha_ensemble = 0.0;
    check_same(EnsembleModel(global, config).suggest_after_word(prefix, profile(local)),
               decoder::top_n(*local, prefix, config.top_n));
    config.alpha_ensemble = 0.6;
    const auto fresh = EnsembleModel(global, config).suggest_after_word(prefix, profile(nullptr));
    check_same(fresh, decoder::top_n(*global, prefix, config.top_n));
    for (const Suggestion& s : fresh) CHECK(s.source == Source::global);
  }
}

TEST_CASE("source mix") {
  SourceMix mix;
  Suggestion s;
  s.attribution = Source::global;
  mix.add(s);
  mix.add(s);
  s.attribution = Source::local;
  mix.add(s);
  s.attribution = Source::character;
  mix.add(s);
  CHECK(mix.total() == 4);
  CHECK(mix.percent(Source::global) == 50.0);
  CHECK(mix.percent(Source::local) == 25.0);
  CHECK(mix.percent(Source::character) == 25.0);
  CHECK(SourceMix{}.percent(Source::global) == 0.0);
}

TEST_CASE("config validation") {
  EnsembleConfig c;
  CHECK_NOTHROW(c.validate());
  c.alpha_ensemble = 1.2;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = {};
  c.top_n = 0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = {};
  c.max_words = 0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  CHECK_THROWS_AS(EnsembleModel(nullptr, {}), InvalidParameter);
}
