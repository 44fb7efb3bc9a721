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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "autocompose/decoder.hpp"
#include "autocompose/ensemble.hpp"

namespace autocompose::metrics {

/// One suggestion opportunity in an offline replay.
struct EvalEvent {
  std::vector<std::string> context;
  std::optional<Suggestion> suggestion;
  std::vector<std::string> ground_truth;
  bool gated = false;
  bool accepted = false;
  std::size_t note_index = 0;
  /// Code-point offset in the note where the suggestion text would start.
  std::size_t char_offset = 0;
};

/// True when `tokens` equals the same-length prefix of `ground_truth`.
bool matches_ground_truth(std::span<const std::string> tokens,
                          std::span<const std::string> ground_truth);

/// Percent of gated suggestions that match the ground truth.
/// Throws UndefinedMetric when no event is gated.
double exact_match_rate(std::span<const EvalEvent> events);

/// Percent of the text's characters covered by accepted suggestions. A
/// character covered by two overlapping accepted suggestions counts once.
/// Throws InvalidParameter when total_chars is 0.
double effort_saved(std::span<const EvalEvent> events, std::size_t total_chars);

/// 100 * gated suggestions / total_chars.
double coverage(std::span<const EvalEvent> events, std::size_t total_chars);
double coverage(std::size_t gated_calls, std::size_t total_chars);

/// Mean code-point length of gated suggestions. Throws UndefinedMetric when
/// none are gated.
double avg_suggestion_length(std::span<const EvalEvent> events);

struct EvalReport {
  double exact_match_rate = 0.0;
  double effort_saved = 0.0;
  double coverage = 0.0;
  double avg_suggestion_length = 0.0;
  double global_percent = 0.0;
  double local_percent = 0.0;
  double char_percent = 0.0;
  std::size_t calls = 0;
  std::size_t gated = 0;
  std::size_t matched = 0;
  std::size_t accepted = 0;
  std::size_t total_chars = 0;

  bool operator==(const EvalReport&) const = default;
};

/// All four metrics plus source mix. Throws UndefinedMetric when nothing is
/// gated.
EvalReport build_report(std::span<const EvalEvent> events, std::size_t total_chars);

/// Incremental version of build_report; merge() is order-independent.
class MetricsAccumulator {
 public:
  void add(const EvalEvent& event);
  void merge(const MetricsAccumulator& other);
  EvalReport report(std::size_t total_chars) const;

 private:
  std::size_t calls_ = 0;
  std::size_t gated_ = 0;
  std::size_t matched_ = 0;
  std::size_t accepted_ = 0;
  std::size_t gated_chars_ = 0;
  SourceMix mix_;
  std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> accepted_spans_;
};

/// Lowest threshold whose coverage lies within `tolerance` of the target.
/// `scores` are the normalized scores of every call that produced a
/// suggestion. A target of 0 yields a threshold above every score.
/// Throws CalibrationFailure when the target exceeds what the scores can
/// reach, or when ties leave no cut point inside the tolerance.
double calibrate_threshold(std::span<const double> scores, std::size_t total_chars,
                           double target_coverage, double tolerance);

/// A note withheld from training.
struct HeldOutNote {
  std::string user_id;
  std::string text;  // normalized
  std::vector<std::string> tokens;
};

HeldOutNote make_held_out(std::string user_id, std::string_view raw_text);

struct EvalCorpus {
  std::shared_ptr<const LanguageModel> global;
  std::unordered_map<std::string, UserProfile> users;
  std::vector<HeldOutNote> notes;

  std::size_t total_chars() const;
};

/// Where replay asks for suggestions.
struct SlicePolicy {
  std::size_t min_context_words = 0;  // skip boundaries with fewer words before them
  std::size_t stride = 1;             // every stride-th boundary
  std::size_t ground_truth_words = 3;
};

/// Queries the ensemble at each sliced word boundary of every note and
/// records the top suggestion. Gating uses config.threshold; acceptance is
/// the exact-match oracle. Notes are replayed on `threads` workers; the
/// result order does not depend on the thread count.
std::vector<EvalEvent> replay(const EvalCorpus& corpus, const EnsembleConfig& config,
                              const SlicePolicy& policy = {}, unsigned threads = 1);

/// Re-gates events recorded with no threshold.
std::vector<EvalEvent> apply_threshold(std::span<const EvalEvent> events, double threshold);

struct AlphaResult {
  double alpha = 0.0;
  double threshold = 0.0;
  EvalReport report;
};

struct GridResult {
  double best_alpha = 0.0;
  std::vector<AlphaResult> per_alpha;
};

/// For each alpha: calibrate the threshold to the target coverage, replay,
/// and score. Best alpha maximizes exact match rate; ties go to the smaller
/// alpha. Calibration failures propagate.
GridResult alpha_grid_search(const EvalCorpus& corpus, std::span<const double> alphas,
                             double target_coverage, double tolerance,
                             const EnsembleConfig& base = {}, const SlicePolicy& policy = {},
                             unsigned threads = 1);

std::string to_json(const EvalReport& report);
std::string to_json(const GridResult& grid);

/// Aligned text table, one row per labelled report.
std::string format_table(std::span<const std::pair<std::string, EvalReport>> rows);

}  // namespace autocompose::metrics
