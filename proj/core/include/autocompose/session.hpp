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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autocompose/charlm.hpp"
#include "autocompose/decoder.hpp"
#include "autocompose/ensemble.hpp"

namespace autocompose::session {

/// Which stage of the per-keystroke cascade produced a completion.
enum class Stage { word_boundary, cache, rematch, character };

std::string_view to_string(Stage stage);

/// Something to show after the caret.
struct Completion {
  std::string remainder;
  Suggestion suggestion;
  Stage stage = Stage::word_boundary;
};

/// Word-level predictions at a word boundary, bound to one user.
class WordPredictor {
 public:
  virtual ~WordPredictor() = default;
  virtual std::vector<Suggestion> suggest(std::span<const std::string> prefix,
                                          std::size_t n) const = 0;
};

/// Completion of the word currently being typed.
class WordCompleter {
 public:
  virtual ~WordCompleter() = default;
  virtual std::optional<Suggestion> complete(std::string_view context,
                                             std::string_view partial) const = 0;
};

class EnsemblePredictor final : public WordPredictor {
 public:
  EnsemblePredictor(const EnsembleModel& model, const UserProfile& user)
      : model_(model), user_(user) {}

  std::vector<Suggestion> suggest(std::span<const std::string> prefix,
                                  std::size_t n) const override {
    return model_.suggest_after_word(prefix, user_, n);
  }

 private:
  const EnsembleModel& model_;
  const UserProfile& user_;
};

class CharCompleter final : public WordCompleter {
 public:
  explicit CharCompleter(const charlm::CharModel& model) : model_(model) {}

  std::optional<Suggestion> complete(std::string_view context,
                                     std::string_view partial) const override {
    return model_.complete_word(context, partial);
  }

 private:
  const charlm::CharModel& model_;
};

/// Top-n candidates captured at the last word boundary.
struct SuggestionCache {
  std::vector<std::string> anchor_prefix;
  std::vector<Suggestion> candidates;  // sorted by decoder::ranks_before
  std::size_t created_at_keystroke = 0;
};

struct TypingState {
  std::string full_text;
  std::string current_partial_word;
  std::string user_id;
  std::optional<SuggestionCache> cache;
  std::size_t keystrokes = 0;

  /// full_text without the partial word.
  std::string_view anchor_text() const;
};

/// Splits `text` into anchor and partial word (the characters after the
/// last whitespace).
TypingState state_from_text(std::string text, std::string user_id = {});

/// Normalized tokens of the anchor text with the start marker and without
/// the end marker: the prefix handed to word models.
std::vector<std::string> anchor_tokens(std::string_view anchor_text);

/// Whitespace test used for word-boundary detection.
bool is_separator(std::string_view code_point);

struct BoundaryResult {
  std::optional<Completion> display;
  SuggestionCache cache;
};

/// Queries the word model. The top candidate is displayed if it passes the
/// gate; every candidate is cached, gated or not.
BoundaryResult on_word_boundary(const TypingState& state, const WordPredictor& predictor,
                                std::size_t n = decoder::kDefaultTopN);

/// Best candidate whose first word starts with `typed` (case-sensitive),
/// with `typed` cut from the front. Candidates that would leave nothing to
/// show are skipped.
std::optional<Completion> prefix_match(std::span<const Suggestion> candidates, std::string_view typed);
std::optional<Completion> prefix_match(const SuggestionCache& cache, std::string_view typed);

/// Re-queries the word model at the last boundary for the top `n`
/// candidates and prefix-matches the partial word against them.
std::optional<Completion> trimmed_rematch(const WordPredictor& predictor, const TypingState& state,
                                          std::size_t n = 3);

struct CascadeOptions {
  bool cache = true;
  bool rematch = true;
  bool character = true;
  std::size_t min_partial_chars = 2;
  std::size_t rematch_n = 3;
};

/// Per-character cascade: cache prefix match, then trimmed-input rematch,
/// then character completion. The first hit wins. The two model stages need
/// at least min_partial_chars typed.
std::optional<Completion> on_char(const TypingState& state, const WordPredictor& predictor,
                                  const WordCompleter* completer, const CascadeOptions& options = {});

/// Drives TypingState one keystroke at a time.
class TypingSession {
 public:
  TypingSession(const WordPredictor& predictor, const WordCompleter* completer,
                CascadeOptions options = {}, std::size_t top_n = decoder::kDefaultTopN);

  /// Suggestion for an empty text (the note start acts as a word boundary).
  std::optional<Completion> begin();

  /// Appends one code point and runs the matching trigger.
  std::optional<Completion> type(std::string_view code_point);

  /// Appends the completion text as if typed, without triggering.
  void accept(const Completion& completion);

  const TypingState& state() const noexcept { return state_; }

 private:
  const WordPredictor& predictor_;
  const WordCompleter* completer_;
  CascadeOptions options_;
  std::size_t top_n_;
  TypingState state_;
};

}  // namespace autocompose::session
