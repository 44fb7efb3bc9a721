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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "autocompose/decoder.hpp"
#include "autocompose/markov.hpp"
#include "autocompose/time.hpp"

namespace autocompose {

struct EnsembleConfig {
  double alpha_ensemble = 0.6;  // weight on the global model
  double alpha_norm = decoder::kDefaultAlphaNorm;
  double threshold = -1.0;
  std::size_t top_n = decoder::kDefaultTopN;
  std::size_t max_words = decoder::kDefaultMaxWords;
  int markov_order = 2;

  /// Throws InvalidParameter when an invariant is violated.
  void validate() const;
};

/// A user plus their personal model snapshot.
struct UserProfile {
  std::string user_id;
  std::shared_ptr<const MarkovModel> local;  // may be null for a new user
  int window_days = 90;
  Timestamp trained_at{};
  std::size_t note_count = 0;
};

namespace ensemble {

/// alpha * global + (1 - alpha) * local over the union of supports. When one
/// side is empty the other is returned unscaled.
/// Throws InvalidParameter when alpha is outside [0, 1].
Distribution combine_step(const Distribution& global, const Distribution& local, double alpha);

/// Per-step interpolation of a global model and one user's local model.
class CombinedModel final : public LanguageModel {
 public:
  CombinedModel(const LanguageModel& global, const LanguageModel* local, double alpha);

  Distribution next_distribution(std::span<const std::string> context) const override;

 private:
  const LanguageModel& global_;
  const LanguageModel* local_;
  double alpha_;
};

}  // namespace ensemble

/// Global language model plus configuration; users are supplied per call.
class EnsembleModel {
 public:
  EnsembleModel(std::shared_ptr<const LanguageModel> global, EnsembleConfig config);

  const LanguageModel& global() const { return *global_; }
  const EnsembleConfig& config() const noexcept { return config_; }

  /// Top-n suggestions after a completed word. Every entry carries its gate
  /// result in `gated`; the list is returned whole for caching.
  std::vector<Suggestion> suggest_after_word(std::span<const std::string> prefix,
                                             const UserProfile& user) const;

  /// Same with an explicit list size.
  std::vector<Suggestion> suggest_after_word(std::span<const std::string> prefix,
                                             const UserProfile& user, std::size_t n) const;

 private:
  void tag_sources(std::span<const std::string> prefix, const UserProfile& user,
                   Suggestion& suggestion) const;

  std::shared_ptr<const LanguageModel> global_;
  EnsembleConfig config_;
};

/// Running tally of which model produced the suggestions shown.
struct SourceMix {
  std::size_t global = 0;
  std::size_t local = 0;
  std::size_t character = 0;

  void add(const Suggestion& s);
  std::size_t total() const noexcept { return global + local + character; }
  double percent(Source s) const;
};

}  // namespace autocompose
