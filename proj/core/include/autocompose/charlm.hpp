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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autocompose/decoder.hpp"
#include "autocompose/markov.hpp"

namespace autocompose::charlm {

/// Symbol standing in for a space between words.
inline constexpr std::string_view kWordBoundary = "␠";

struct CharModelOptions {
  double backoff_factor = 0.4;
  std::size_t max_completion_chars = 15;
  double alpha_norm = decoder::kDefaultAlphaNorm;
  double threshold = -std::numeric_limits<double>::infinity();
};

/// Character n-gram with stupid backoff, completing the word being typed.
class CharModel {
 public:
  /// Throws InvalidParameter if the model is not a character model or the
  /// options are out of range (backoff_factor must lie in (0, 1]).
  explicit CharModel(MarkovModel inner, CharModelOptions options = {});

  const MarkovModel& inner() const noexcept { return inner_; }
  const CharModelOptions& options() const noexcept { return options_; }
  int order() const noexcept { return inner_.order(); }

  /// Greedy completion of `typed_prefix` given the text before it. Each
  /// step uses the longest seen context suffix; every level backed off
  /// multiplies the step probability by backoff_factor. Stops at a word
  /// boundary, the end symbol, or max_completion_chars. Returns only the
  /// characters after `typed_prefix`, never an empty remainder.
  std::optional<Suggestion> complete_word(std::string_view context_chars,
                                          std::string_view typed_prefix) const;

 private:
  MarkovModel inner_;
  CharModelOptions options_;
};

/// Maps text to character symbols: one per code point, whitespace becomes
/// kWordBoundary.
std::vector<std::string> to_symbols(std::string_view text);

/// Trains on normalized texts; each text is followed by the end symbol.
/// Throws InvalidParameter when order < 1.
CharModel train_char(std::span<const std::string> texts, int order, CharModelOptions options = {});

}  // namespace autocompose::charlm
