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

#include "autocompose/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "autocompose/errors.hpp"

namespace autocompose {

std::string_view to_string(Source source) {
  switch (source) {
    case Source::global: return "global";
    case Source::local: return "local";
    case Source::ensemble: return "ensemble";
    case Source::character: return "char";
  }
  return "global";
}

Source source_from_string(std::string_view s) {
  if (s == "global") return Source::global;
  if (s == "local") return Source::local;
  if (s == "ensemble") return Source::ensemble;
  if (s == "char") return Source::character;
  throw InvalidParameter("unknown source '" + std::string(s) + "'");
}

std::string Suggestion::text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

namespace decoder {
namespace {

Source default_attribution(Source source) {
  return source == Source::ensemble ? Source::global : source;
}

// Appends argmax tokens to `s` until it holds max_words tokens.
void extend_greedily(const LanguageModel& lm, std::vector<std::string>& context, Suggestion& s,
                     const DecodeOptions& options) {
  while (s.tokens.size() < options.max_words) {
    Distribution dist = lm.next_distribution(context);
    const Distribution::Entry* best = dist.argmax();
    if (best == nullptr || best->symbol == options.end_token) break;
    s.tokens.push_back(best->symbol);
    s.raw_logprob += std::log(best->probability);
    context.push_back(best->symbol);
  }
}

}  // namespace

double length_normalizer(std::size_t len_seq, double alpha_norm) {
  if (len_seq < 1) throw InvalidParameter("len_seq must be >= 1");
  if (!(alpha_norm >= 0.0)) throw InvalidParameter("alpha_norm must be >= 0");
  return std::pow(5.0 + static_cast<double>(len_seq), alpha_norm) / std::pow(6.0, alpha_norm);
}

void normalize(Suggestion& suggestion, double alpha_norm) {
  suggestion.normalized_score =
      suggestion.raw_logprob / length_normalizer(suggestion.tokens.size(), alpha_norm);
}

bool ranks_before(const Suggestion& a, const Suggestion& b) {
  if (a.normalized_score != b.normalized_score) return a.normalized_score > b.normalized_score;
  return a.text() < b.text();
}

std::optional<Suggestion> greedy_decode(const LanguageModel& lm, std::span<const std::string> prefix,
                                        const DecodeOptions& options) {
  if (options.max_words < 1) throw InvalidParameter("max_words must be >= 1");
  std::vector<std::string> context(prefix.begin(), prefix.end());
  Suggestion s;
  s.source = options.source;
  s.attribution = default_attribution(options.source);
  extend_greedily(lm, context, s, options);
  if (s.tokens.empty()) return std::nullopt;
  normalize(s, options.alpha_norm);
  return s;
}

std::vector<Suggestion> top_n(const LanguageModel& lm, std::span<const std::string> prefix,
                              std::size_t n, const DecodeOptions& options) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (options.max_words < 1) throw InvalidParameter("max_words must be >= 1");

  std::vector<Suggestion> out;
  Distribution first = lm.next_distribution(prefix);
  for (const Distribution::Entry& e : first.top(n)) {
    if (e.symbol == options.end_token) continue;
    std::vector<std::string> context(prefix.begin(), prefix.end());
    context.push_back(e.symbol);
    Suggestion s;
    s.source = options.source;
    s.attribution = default_attribution(options.source);
    s.tokens.push_back(e.symbol);
    s.raw_logprob = std::log(e.probability);
    extend_greedily(lm, context, s, options);
    normalize(s, options.alpha_norm);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

bool gate(const Suggestion& suggestion, double threshold) {
  return suggestion.normalized_score >= threshold;
}

}  // namespace decoder
}  // namespace autocompose
