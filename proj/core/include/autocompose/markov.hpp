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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace autocompose {

/// Probability distribution over the next symbol. Entries are kept sorted by
/// symbol so lookups are logarithmic and iteration order is stable.
class Distribution {
 public:
  struct Entry {
    std::string symbol;
    double probability = 0.0;

    bool operator==(const Entry&) const = default;
  };

  Distribution() = default;

  /// Takes ownership of `entries`; sorts them by symbol. Zero-probability
  /// entries are dropped.
  explicit Distribution(std::vector<Entry> entries);

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// 0.0 for symbols outside the support.
  double probability(std::string_view symbol) const;

  /// Most probable entry; ties go to the lexicographically smallest symbol.
  const Entry* argmax() const;

  /// The `n` most probable entries, probability descending then symbol
  /// ascending.
  std::vector<Entry> top(std::size_t n) const;

  double total() const;

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Anything that can predict the next token from a token context.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual Distribution next_distribution(std::span<const std::string> context) const = 0;
};

enum class SymbolKind { word, character };

std::string_view to_string(SymbolKind kind);
SymbolKind symbol_kind_from_string(std::string_view s);

using SymbolId = std::uint32_t;

struct Transition {
  SymbolId symbol;
  std::uint64_t count;
};

/// Counts for one context. `count` always equals the sum of `next` counts.
struct ContextEntry {
  std::uint64_t count = 0;
  std::vector<Transition> next;  // sorted by symbol id
};

/// One context in string form, used for serialization and comparison.
struct ContextRecord {
  std::vector<std::string> context;
  std::uint64_t count = 0;
  std::vector<std::pair<std::string, std::uint64_t>> next;  // sorted by symbol

  bool operator==(const ContextRecord&) const = default;
};

/// Order-k counted-transition model with maximum-likelihood probabilities.
///
/// Every context of length 1..k seen in training is tallied. Word models pad
/// sequences that begin with the start token with k-1 extra start tokens, so
/// the first word of a note has a full length-k context. Character models
/// are never padded.
///
/// next_distribution() is pure MLE over the exact length-k context: an unseen
/// context gives an empty distribution. Shorter contexts are available
/// through distribution_for() for callers that implement their own backoff.
class MarkovModel final : public LanguageModel {
 public:
  explicit MarkovModel(int order, SymbolKind kind = SymbolKind::word);

  /// Throws InvalidParameter when order < 1.
  static MarkovModel train(std::span<const std::vector<std::string>> sequences, int order,
                           SymbolKind kind = SymbolKind::word);

  /// Adds the tallies of one more sequence. Equivalent to having included it
  /// in the original training corpus.
  void add_sequence(std::span<const std::string> sequence);

  Distribution next_distribution(std::span<const std::string> context) const override;

  /// MLE distribution for exactly `context` (length 1..k), no padding.
  Distribution distribution_for(std::span<const std::string> context) const;

  int order() const noexcept { return order_; }
  SymbolKind kind() const noexcept { return kind_; }
  bool empty() const noexcept { return contexts_.empty(); }
  std::size_t context_count() const noexcept { return contexts_.size(); }
  std::size_t vocabulary_size() const noexcept { return symbols_.size(); }

  /// Number of symbols tallied as transition targets at context length 1.
  std::uint64_t token_count() const noexcept { return token_count_; }

  /// Count of the context (sum of its transitions), 0 when unseen.
  std::uint64_t count(std::span<const std::string> context) const;
  std::uint64_t count(std::span<const std::string> context, std::string_view next) const;

  std::optional<SymbolId> symbol_id(std::string_view symbol) const;
  const std::string& symbol(SymbolId id) const { return symbols_[id]; }
  const ContextEntry* find(std::span<const SymbolId> context) const;

  /// All contexts in string form, sorted by context.
  std::vector<ContextRecord> records() const;

  /// Rebuilds a model from records; throws IntegrityError if they violate
  /// the count invariants.
  static MarkovModel from_records(int order, SymbolKind kind, std::span<const ContextRecord> records);

  /// Checks that every context count equals the sum of its transitions.
  bool consistent() const;

  /// Structural equality on counts (symbol numbering is ignored).
  bool operator==(const MarkovModel& other) const;

 private:
  SymbolId intern(const std::string& symbol);
  static std::string pack(std::span<const SymbolId> ids);
  std::vector<std::string> padded_context(std::span<const std::string> context) const;

  int order_;
  SymbolKind kind_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_index_;
  std::unordered_map<std::string, ContextEntry> contexts_;
  std::uint64_t token_count_ = 0;
};

/// Returns a copy of `model` with `sequence` added.
MarkovModel update(const MarkovModel& model, std::span<const std::string> sequence);

/// JSON model file: {"contexts":[{"count","ctx","next"}...],"k","symbol_kind"},
/// one context per line, contexts sorted, keys sorted.
std::string serialize(const MarkovModel& model);

/// Throws IntegrityError on malformed input.
MarkovModel deserialize(std::string_view text);

}  // namespace autocompose
