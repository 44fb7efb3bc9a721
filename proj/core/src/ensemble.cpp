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

#include "autocompose/ensemble.hpp"

#include <cmath>

#include "autocompose/errors.hpp"

namespace autocompose {

void EnsembleConfig::validate() const {
  if (!(alpha_ensemble >= 0.0 && alpha_ensemble <= 1.0)) {
    throw InvalidParameter("alpha_ensemble must lie in [0, 1]");
  }
  if (!(alpha_norm >= 0.0)) throw InvalidParameter("alpha_norm must be >= 0");
  if (std::isnan(threshold)) throw InvalidParameter("threshold must be a number");
  if (top_n < 1) throw InvalidParameter("top_n must be >= 1");
  if (max_words < 1) throw InvalidParameter("max_words must be >= 1");
  if (markov_order < 1) throw InvalidParameter("markov_order must be >= 1");
}

namespace ensemble {

Distribution combine_step(const Distribution& global, const Distribution& local, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in [0, 1]");
  if (local.empty()) return global;
  if (global.empty()) return local;

  // Both entry lists are sorted by symbol: merge them.
  std::vector<Distribution::Entry> merged;
  merged.reserve(global.size() + local.size());
  auto g = global.begin();
  auto l = local.begin();
  while (g != global.end() || l != local.end()) {
    if (l == local.end() || (g != global.end() && g->symbol < l->symbol)) {
      merged.push_back({g->symbol, alpha * g->probability});
      ++g;
    } else if (g == global.end() || l->symbol < g->symbol) {
      merged.push_back({l->symbol, (1.0 - alpha) * l->probability});
      ++l;
    } else {
      merged.push_back({g->symbol, alpha * g->probability + (1.0 - alpha) * l->probability});
      ++g;
      ++l;
    }
  }
  return Distribution(std::move(merged));
}

CombinedModel::CombinedModel(const LanguageModel& global, const LanguageModel* local, double alpha)
    : global_(global), local_(local), alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in [0, 1]");
}

Distribution CombinedModel::next_distribution(std::span<const std::string> context) const {
  Distribution g = global_.next_distribution(context);
  Distribution l = local_ ? local_->next_distribution(context) : Distribution{};
  return combine_step(g, l, alpha_);
}

}  // namespace ensemble

EnsembleModel::EnsembleModel(std::shared_ptr<const LanguageModel> global, EnsembleConfig config)
    : global_(std::move(global)), config_(config) {
  if (!global_) throw InvalidParameter("ensemble needs a global model");
  config_.validate();
}

std::vector<Suggestion> EnsembleModel::suggest_after_word(std::span<const std::string> prefix,
                                                          const UserProfile& user) const {
  return suggest_after_word(prefix, user, config_.top_n);
}

std::vector<Suggestion> EnsembleModel::suggest_after_word(std::span<const std::string> prefix,
                                                          const UserProfile& user,
                                                          std::size_t n) const {
  ensemble::CombinedModel lm(*global_, user.local.get(), config_.alpha_ensemble);
  decoder::DecodeOptions options;
  options.max_words = config_.max_words;
  options.alpha_norm = config_.alpha_norm;
  options.source = Source::ensemble;

  std::vector<Suggestion> out = decoder::top_n(lm, prefix, n, options);
  for (Suggestion& s : out) {
    tag_sources(prefix, user, s);
    s.gated = decoder::gate(s, config_.threshold);
  }
  return out;
}

void EnsembleModel::tag_sources(std::span<const std::string> prefix, const UserProfile& user,
                                Suggestion& suggestion) const {
  const double alpha = config_.alpha_ensemble;
  std::vector<std::string> context(prefix.begin(), prefix.end());
  bool any_global = false;
  bool any_local = false;
  std::size_t global_votes = 0;
  std::size_t local_votes = 0;
  for (const std::string& token : suggestion.tokens) {
    Distribution g = global_->next_distribution(context);
    Distribution l = user.local ? user.local->next_distribution(context) : Distribution{};
    any_global = any_global || !g.empty();
    any_local = any_local || !l.empty();
    const double wg = g.empty() ? 0.0 : (l.empty() ? 1.0 : alpha) * g.probability(token);
    const double wl = l.empty() ? 0.0 : (g.empty() ? 1.0 : 1.0 - alpha) * l.probability(token);
    if (wl > wg) {
      ++local_votes;
    } else {
      ++global_votes;
    }
    context.push_back(token);
  }
  suggestion.source = (any_global && any_local) ? Source::ensemble
                      : any_local                ? Source::local
                                                 : Source::global;
  suggestion.attribution = local_votes > global_votes ? Source::local : Source::global;
}

void SourceMix::add(const Suggestion& s) {
  switch (s.attribution) {
    case Source::local: ++local; break;
    case Source::character: ++character; break;
    default: ++global; break;
  }
}

double SourceMix::percent(Source s) const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  std::size_t part = s == Source::local ? local : s == Source::character ? character : global;
  return 100.0 * static_cast<double>(part) / static_cast<double>(n);
}

}  // namespace autocompose
