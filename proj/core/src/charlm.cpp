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

#include "autocompose/charlm.hpp"

#include <algorithm>
#include <cmath>

#include "autocompose/corpus.hpp"
#include "autocompose/errors.hpp"
#include "autocompose/utf8.hpp"

namespace autocompose::charlm {

std::vector<std::string> to_symbols(std::string_view text) {
  std::vector<std::string> out = utf8::code_points(text);
  for (std::string& cp : out) {
    if (utf8::is_space(cp)) cp = kWordBoundary;
  }
  return out;
}

CharModel train_char(std::span<const std::string> texts, int order, CharModelOptions options) {
  MarkovModel inner(order, SymbolKind::character);
  for (const std::string& text : texts) {
    std::vector<std::string> seq = to_symbols(text);
    seq.emplace_back(corpus::kEndToken);
    inner.add_sequence(seq);
  }
  return CharModel(std::move(inner), options);
}

CharModel::CharModel(MarkovModel inner, CharModelOptions options)
    : inner_(std::move(inner)), options_(options) {
  if (inner_.kind() != SymbolKind::character) {
    throw InvalidParameter("character model needs symbol_kind \"char\"");
  }
  if (!(options_.backoff_factor > 0.0 && options_.backoff_factor <= 1.0)) {
    throw InvalidParameter("backoff_factor must lie in (0, 1]");
  }
  if (options_.max_completion_chars < 1) {
    throw InvalidParameter("max_completion_chars must be >= 1");
  }
}

std::optional<Suggestion> CharModel::complete_word(std::string_view context_chars,
                                                   std::string_view typed_prefix) const {
  std::vector<std::optional<SymbolId>> history;
  for (std::string_view part : {context_chars, typed_prefix}) {
    for (const std::string& symbol : to_symbols(part)) history.push_back(inner_.symbol_id(symbol));
  }

  const auto order = static_cast<std::size_t>(inner_.order());
  std::string remainder;
  std::size_t produced = 0;
  double logprob = 0.0;
  std::vector<SymbolId> ids;
  while (produced < options_.max_completion_chars) {
    const std::size_t start_len = std::min(order, history.size());
    const ContextEntry* entry = nullptr;
    std::size_t used_len = 0;
    for (std::size_t len = start_len; len >= 1 && entry == nullptr; --len) {
      ids.clear();
      for (std::size_t i = history.size() - len; i < history.size(); ++i) {
        if (!history[i]) break;
        ids.push_back(*history[i]);
      }
      if (ids.size() != len) continue;
      entry = inner_.find(ids);
      used_len = len;
    }
    if (entry == nullptr) break;

    const Transition* best = nullptr;
    for (const Transition& t : entry->next) {
      if (best == nullptr || t.count > best->count ||
          (t.count == best->count && inner_.symbol(t.symbol) < inner_.symbol(best->symbol))) {
        best = &t;
      }
    }
    const std::string& symbol = inner_.symbol(best->symbol);
    if (symbol == kWordBoundary || symbol == corpus::kEndToken) break;

    const double p = static_cast<double>(best->count) / static_cast<double>(entry->count) *
                     std::pow(options_.backoff_factor, static_cast<double>(start_len - used_len));
    logprob += std::log(p);
    remainder += symbol;
    history.emplace_back(best->symbol);
    ++produced;
  }
  if (remainder.empty()) return std::nullopt;

  Suggestion s;
  s.tokens = {remainder};
  s.raw_logprob = logprob;
  s.normalized_score = logprob / decoder::length_normalizer(produced, options_.alpha_norm);
  s.source = Source::character;
  s.attribution = Source::character;
  if (!decoder::gate(s, options_.threshold)) return std::nullopt;
  s.gated = true;
  return s;
}

}  // namespace autocompose::charlm
