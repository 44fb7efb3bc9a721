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

#include "autocompose/markov.hpp"

namespace autocompose {

enum class Source { global, local, ensemble, character };

std::string_view to_string(Source source);
Source source_from_string(std::string_view s);

/// A scored continuation.
struct Suggestion {
  std::vector<std::string> tokens;
  double raw_logprob = 0.0;       // natural log, <= 0
  double normalized_score = 0.0;  // raw_logprob / length_normalizer(len)
  Source source = Source::global;
  /// Which side carried most of the probability mass (global or local for
  /// word suggestions, character for completions).
  Source attribution = Source::global;
  bool gated = false;

  /// Tokens joined with single spaces.
  std::string text() const;
};

namespace decoder {

inline constexpr double kDefaultAlphaNorm = 0.4;
inline constexpr std::size_t kDefaultMaxWords = 3;
inline constexpr std::size_t kDefaultTopN = 3;

/// ((5 + len_seq)^alpha_norm) / (6^alpha_norm).
/// Throws InvalidParameter for len_seq < 1 or alpha_norm < 0.
double length_normalizer(std::size_t len_seq, double alpha_norm = kDefaultAlphaNorm);

struct DecodeOptions {
  std::size_t max_words = kDefaultMaxWords;
  double alpha_norm = kDefaultAlphaNorm;
  Source source = Source::global;
  std::string_view end_token = "</s>";
};

/// Repeatedly appends the argmax token (ties: lexicographically smallest)
/// until max_words, the end token, or an empty distribution. Returns nullopt
/// when nothing could be generated.
std::optional<Suggestion> greedy_decode(const LanguageModel& lm, std::span<const std::string> prefix,
                                        const DecodeOptions& options = {});

/// Branches on the `n` most probable first tokens and continues each
/// greedily. Sorted by normalized_score descending, ties by text ascending.
/// A branch whose first token is the end token yields nothing, so the
/// result may hold fewer than `n` suggestions.
std::vector<Suggestion> top_n(const LanguageModel& lm, std::span<const std::string> prefix,
                              std::size_t n, const DecodeOptions& options = {});

/// normalized_score >= threshold.
bool gate(const Suggestion& suggestion, double threshold);

/// Fills normalized_score from raw_logprob and token count.
void normalize(Suggestion& suggestion, double alpha_norm);

/// Sort order shared by every suggestion list.
bool ranks_before(const Suggestion& a, const Suggestion& b);

}  // namespace decoder
}  // namespace autocompose
