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

#include "autocompose/session.hpp"

#include <algorithm>

#include "autocompose/corpus.hpp"
#include "autocompose/utf8.hpp"

namespace autocompose::session {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::word_boundary: return "word_boundary";
    case Stage::cache: return "cache";
    case Stage::rematch: return "rematch";
    case Stage::character: return "char";
  }
  return "word_boundary";
}

std::string_view TypingState::anchor_text() const {
  std::string_view text = full_text;
  return text.substr(0, text.size() - current_partial_word.size());
}

bool is_separator(std::string_view code_point) { return utf8::is_space(code_point); }

TypingState state_from_text(std::string text, std::string user_id) {
  TypingState state;
  std::size_t partial_start = 0;
  std::size_t i = 0;
  for (const std::string& cp : utf8::code_points(text)) {
    i += cp.size();
    if (is_separator(cp)) partial_start = i;
  }
  state.current_partial_word = text.substr(partial_start);
  state.full_text = std::move(text);
  state.user_id = std::move(user_id);
  return state;
}

std::vector<std::string> anchor_tokens(std::string_view anchor_text) {
  corpus::TokenSequence tokens = corpus::prepare(anchor_text);
  if (!tokens.empty() && tokens.back() == corpus::kEndToken) tokens.pop_back();
  return tokens;
}

BoundaryResult on_word_boundary(const TypingState& state, const WordPredictor& predictor,
                                std::size_t n) {
  BoundaryResult result;
  result.cache.anchor_prefix = anchor_tokens(state.anchor_text());
  result.cache.candidates = predictor.suggest(result.cache.anchor_prefix, n);
  result.cache.created_at_keystroke = state.keystrokes;
  std::stable_sort(result.cache.candidates.begin(), result.cache.candidates.end(),
                   decoder::ranks_before);
  if (!result.cache.candidates.empty() && result.cache.candidates.front().gated) {
    const Suggestion& top = result.cache.candidates.front();
    result.display = Completion{top.text(), top, Stage::word_boundary};
  }
  return result;
}

std::optional<Completion> prefix_match(std::span<const Suggestion> candidates,
                                       std::string_view typed) {
  if (typed.empty()) return std::nullopt;
  const Suggestion* best = nullptr;
  for (const Suggestion& s : candidates) {
    if (s.tokens.empty() || !s.tokens.front().starts_with(typed)) continue;
    if (s.tokens.size() == 1 && s.tokens.front().size() == typed.size()) continue;
    if (best == nullptr || decoder::ranks_before(s, *best)) best = &s;
  }
  if (best == nullptr) return std::nullopt;

  Completion out;
  out.suggestion = *best;
  out.suggestion.tokens.front().erase(0, typed.size());
  out.remainder = out.suggestion.text();
  out.stage = Stage::cache;
  return out;
}

std::optional<Completion> prefix_match(const SuggestionCache& cache, std::string_view typed) {
  return prefix_match(std::span<const Suggestion>(cache.candidates), typed);
}

std::optional<Completion> trimmed_rematch(const WordPredictor& predictor, const TypingState& state,
                                          std::size_t n) {
  std::vector<Suggestion> candidates = predictor.suggest(anchor_tokens(state.anchor_text()), n);
  std::optional<Completion> hit = prefix_match(candidates, state.current_partial_word);
  if (hit) hit->stage = Stage::rematch;
  return hit;
}

std::optional<Completion> on_char(const TypingState& state, const WordPredictor& predictor,
                                  const WordCompleter* completer, const CascadeOptions& options) {
  const std::string& partial = state.current_partial_word;
  if (partial.empty()) return std::nullopt;

  if (options.cache && state.cache) {
    if (auto hit = prefix_match(*state.cache, partial)) return hit;
  }
  if (utf8::length(partial) < options.min_partial_chars) return std::nullopt;

  if (options.rematch) {
    if (auto hit = trimmed_rematch(predictor, state, options.rematch_n)) return hit;
  }
  if (options.character && completer != nullptr) {
    std::string context = corpus::normalize_text(state.anchor_text());
    if (!context.empty()) context += ' ';
    if (auto s = completer->complete(context, partial)) {
      std::string remainder = s->text();
      return Completion{std::move(remainder), std::move(*s), Stage::character};
    }
  }
  return std::nullopt;
}

TypingSession::TypingSession(const WordPredictor& predictor, const WordCompleter* completer,
                             CascadeOptions options, std::size_t top_n)
    : predictor_(predictor), completer_(completer), options_(options), top_n_(top_n) {}

std::optional<Completion> TypingSession::begin() {
  state_ = TypingState{};
  BoundaryResult r = on_word_boundary(state_, predictor_, top_n_);
  state_.cache = std::move(r.cache);
  return r.display;
}

std::optional<Completion> TypingSession::type(std::string_view code_point) {
  state_.full_text += code_point;
  ++state_.keystrokes;
  if (is_separator(code_point)) {
    state_.current_partial_word.clear();
    BoundaryResult r = on_word_boundary(state_, predictor_, top_n_);
    state_.cache = std::move(r.cache);
    return r.display;
  }
  state_.current_partial_word += code_point;
  return on_char(state_, predictor_, completer_, options_);
}

void TypingSession::accept(const Completion& completion) {
  TypingState next = state_from_text(state_.full_text + completion.remainder, state_.user_id);
  next.keystrokes = state_.keystrokes;
  if (next.anchor_text() == state_.anchor_text()) next.cache = std::move(state_.cache);
  state_ = std::move(next);
}

}  // namespace autocompose::session
