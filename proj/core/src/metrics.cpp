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

#include "autocompose/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

#include "autocompose/corpus.hpp"
#include "autocompose/errors.hpp"
#include "autocompose/utf8.hpp"

namespace autocompose::metrics {
namespace {

using Span = std::pair<std::size_t, std::size_t>;

std::size_t union_length(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end());
  std::size_t total = 0;
  std::size_t covered_to = 0;
  for (const auto& [begin, end] : spans) {
    const std::size_t from = std::max(begin, covered_to);
    if (end > from) total += end - from;
    covered_to = std::max(covered_to, end);
  }
  return total;
}

bool is_gated(const EvalEvent& e) { return e.gated && e.suggestion.has_value(); }

double percent(std::size_t part, std::size_t whole) {
  return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

bool matches_ground_truth(std::span<const std::string> tokens,
                          std::span<const std::string> ground_truth) {
  if (tokens.empty() || tokens.size() > ground_truth.size()) return false;
  return std::equal(tokens.begin(), tokens.end(), ground_truth.begin());
}

double exact_match_rate(std::span<const EvalEvent> events) {
  std::size_t gated = 0;
  std::size_t matched = 0;
  for (const EvalEvent& e : events) {
    if (!is_gated(e)) continue;
    ++gated;
    if (matches_ground_truth(e.suggestion->tokens, e.ground_truth)) ++matched;
  }
  if (gated == 0) throw UndefinedMetric("exact match rate needs at least one gated suggestion");
  return percent(matched, gated);
}

double effort_saved(std::span<const EvalEvent> events, std::size_t total_chars) {
  if (total_chars == 0) throw InvalidParameter("total_chars must be > 0");
  std::map<std::size_t, std::vector<Span>> spans;
  for (const EvalEvent& e : events) {
    if (!e.accepted || !e.suggestion) continue;
    const std::size_t len = utf8::length(e.suggestion->text());
    spans[e.note_index].emplace_back(e.char_offset, e.char_offset + len);
  }
  std::size_t saved = 0;
  for (auto& [note, list] : spans) saved += union_length(std::move(list));
  return percent(saved, total_chars);
}

double coverage(std::size_t gated_calls, std::size_t total_chars) {
  if (total_chars == 0) throw InvalidParameter("total_chars must be > 0");
  return percent(gated_calls, total_chars);
}

double coverage(std::span<const EvalEvent> events, std::size_t total_chars) {
  return coverage(static_cast<std::size_t>(std::count_if(events.begin(), events.end(), is_gated)),
                  total_chars);
}

double avg_suggestion_length(std::span<const EvalEvent> events) {
  std::size_t gated = 0;
  std::size_t chars = 0;
  for (const EvalEvent& e : events) {
    if (!is_gated(e)) continue;
    ++gated;
    chars += utf8::length(e.suggestion->text());
  }
  if (gated == 0) throw UndefinedMetric("average length needs at least one gated suggestion");
  return static_cast<double>(chars) / static_cast<double>(gated);
}

void MetricsAccumulator::add(const EvalEvent& event) {
  ++calls_;
  if (!is_gated(event)) return;
  ++gated_;
  const std::size_t len = utf8::length(event.suggestion->text());
  gated_chars_ += len;
  mix_.add(*event.suggestion);
  if (matches_ground_truth(event.suggestion->tokens, event.ground_truth)) ++matched_;
  if (event.accepted) {
    ++accepted_;
    accepted_spans_[event.note_index].emplace_back(event.char_offset, event.char_offset + len);
  }
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  calls_ += other.calls_;
  gated_ += other.gated_;
  matched_ += other.matched_;
  accepted_ += other.accepted_;
  gated_chars_ += other.gated_chars_;
  mix_.global += other.mix_.global;
  mix_.local += other.mix_.local;
  mix_.character += other.mix_.character;
  for (const auto& [note, list] : other.accepted_spans_) {
    auto& mine = accepted_spans_[note];
    mine.insert(mine.end(), list.begin(), list.end());
  }
}

EvalReport MetricsAccumulator::report(std::size_t total_chars) const {
  if (total_chars == 0) throw InvalidParameter("total_chars must be > 0");
  if (gated_ == 0) throw UndefinedMetric("no gated suggestions to report on");
  EvalReport r;
  r.calls = calls_;
  r.gated = gated_;
  r.matched = matched_;
  r.accepted = accepted_;
  r.total_chars = total_chars;
  r.exact_match_rate = percent(matched_, gated_);
  std::size_t saved = 0;
  for (const auto& [note, list] : accepted_spans_) saved += union_length(list);
  r.effort_saved = percent(saved, total_chars);
  r.coverage = percent(gated_, total_chars);
  r.avg_suggestion_length = static_cast<double>(gated_chars_) / static_cast<double>(gated_);
  r.global_percent = mix_.percent(Source::global);
  r.local_percent = mix_.percent(Source::local);
  r.char_percent = mix_.percent(Source::character);
  return r;
}

EvalReport build_report(std::span<const EvalEvent> events, std::size_t total_chars) {
  MetricsAccumulator acc;
  for (const EvalEvent& e : events) acc.add(e);
  return acc.report(total_chars);
}

double calibrate_threshold(std::span<const double> scores, std::size_t total_chars,
                           double target_coverage, double tolerance) {
  if (total_chars == 0) throw InvalidParameter("total_chars must be > 0");
  if (!(target_coverage >= 0.0)) throw InvalidParameter("target coverage must be >= 0");
  if (!(tolerance >= 0.0)) throw InvalidParameter("tolerance must be >= 0");

  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double max_coverage = coverage(sorted.size(), total_chars);
  const double above_max =
      sorted.empty() ? 0.0 : std::nextafter(sorted.back(), std::numeric_limits<double>::infinity());
  if (target_coverage == 0.0) return above_max;
  if (target_coverage > max_coverage + tolerance) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "target coverage %.4f exceeds the maximum achievable %.4f",
                  target_coverage, max_coverage);
    throw CalibrationFailure(msg, max_coverage);
  }

  // Candidate thresholds: every distinct score, then one above them all.
  std::vector<double> cuts(sorted.begin(), sorted.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(above_max);
  auto coverage_at = [&](double t) {
    auto first = std::lower_bound(sorted.begin(), sorted.end(), t);
    return coverage(static_cast<std::size_t>(sorted.end() - first), total_chars);
  };
  // Coverage is non-increasing in the threshold: find the lowest cut that
  // does not overshoot the target band.
  auto it = std::partition_point(cuts.begin(), cuts.end(), [&](double t) {
    return coverage_at(t) > target_coverage + tolerance;
  });
  if (it == cuts.end() || coverage_at(*it) < target_coverage - tolerance) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "no threshold puts coverage within %.4f of %.4f", tolerance,
                  target_coverage);
    throw CalibrationFailure(msg, max_coverage);
  }
  return *it;
}

HeldOutNote make_held_out(std::string user_id, std::string_view raw_text) {
  HeldOutNote note;
  note.user_id = std::move(user_id);
  note.text = corpus::normalize_text(raw_text);
  corpus::TokenSequence seq = corpus::tokenize_words(note.text);
  note.tokens.assign(seq.begin() + 1, seq.end() - 1);
  return note;
}

std::size_t EvalCorpus::total_chars() const {
  std::size_t n = 0;
  for (const HeldOutNote& note : notes) n += utf8::length(note.text);
  return n;
}

namespace {

std::vector<EvalEvent> replay_note(const EnsembleModel& model, const UserProfile& user,
                                   const HeldOutNote& note, std::size_t note_index,
                                   const SlicePolicy& policy) {
  std::vector<EvalEvent> events;
  std::vector<std::string> context{std::string(corpus::kStartToken)};
  std::size_t offset = 0;
  for (std::size_t i = 0; i < note.tokens.size(); ++i) {
    if (i > 0) {
      context.push_back(note.tokens[i - 1]);
      offset += utf8::length(note.tokens[i - 1]) + 1;
    }
    if (i < policy.min_context_words || (i - policy.min_context_words) % policy.stride != 0) {
      continue;
    }
    EvalEvent e;
    e.context = context;
    e.note_index = note_index;
    e.char_offset = offset;
    const std::size_t end = std::min(note.tokens.size(), i + policy.ground_truth_words);
    e.ground_truth.assign(note.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                          note.tokens.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<Suggestion> list = model.suggest_after_word(context, user);
    if (!list.empty()) {
      e.suggestion = std::move(list.front());
      e.gated = e.suggestion->gated;
      e.accepted = e.gated && matches_ground_truth(e.suggestion->tokens, e.ground_truth);
    }
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace

std::vector<EvalEvent> replay(const EvalCorpus& corpus, const EnsembleConfig& config,
                              const SlicePolicy& policy, unsigned threads) {
  if (policy.stride < 1) throw InvalidParameter("stride must be >= 1");
  if (policy.ground_truth_words < 1) throw InvalidParameter("ground_truth_words must be >= 1");
  const EnsembleModel model(corpus.global, config);
  const UserProfile nobody;

  std::vector<std::vector<EvalEvent>> per_note(corpus.notes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < corpus.notes.size(); i = next++) {
      const HeldOutNote& note = corpus.notes[i];
      auto u = corpus.users.find(note.user_id);
      per_note[i] = replay_note(model, u == corpus.users.end() ? nobody : u->second, note, i, policy);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(corpus.notes.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::vector<EvalEvent> out;
  for (auto& events : per_note) {
    std::move(events.begin(), events.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<EvalEvent> apply_threshold(std::span<const EvalEvent> events, double threshold) {
  std::vector<EvalEvent> out(events.begin(), events.end());
  for (EvalEvent& e : out) {
    e.gated = e.suggestion && decoder::gate(*e.suggestion, threshold);
    if (e.suggestion) e.suggestion->gated = e.gated;
    e.accepted = e.gated && matches_ground_truth(e.suggestion->tokens, e.ground_truth);
  }
  return out;
}

GridResult alpha_grid_search(const EvalCorpus& corpus, std::span<const double> alphas,
                             double target_coverage, double tolerance, const EnsembleConfig& base,
                             const SlicePolicy& policy, unsigned threads) {
  if (alphas.empty()) throw InvalidParameter("alpha grid is empty");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidParameter("alpha values must lie in [0, 1]");
  }
  const std::size_t total_chars = corpus.total_chars();

  GridResult grid;
  for (double alpha : alphas) {
    EnsembleConfig config = base;
    config.alpha_ensemble = alpha;
    config.threshold = -std::numeric_limits<double>::infinity();
    const std::vector<EvalEvent> raw = replay(corpus, config, policy, threads);

    std::vector<double> scores;
    for (const EvalEvent& e : raw) {
      if (e.suggestion) scores.push_back(e.suggestion->normalized_score);
    }
    AlphaResult r;
    r.alpha = alpha;
    r.threshold = calibrate_threshold(scores, total_chars, target_coverage, tolerance);
    r.report = build_report(apply_threshold(raw, r.threshold), total_chars);
    grid.per_alpha.push_back(r);
  }

  const AlphaResult* best = nullptr;
  for (const AlphaResult& r : grid.per_alpha) {
    if (best == nullptr || r.report.exact_match_rate > best->report.exact_match_rate ||
        (r.report.exact_match_rate == best->report.exact_match_rate && r.alpha < best->alpha)) {
      best = &r;
    }
  }
  grid.best_alpha = best->alpha;
  return grid;
}

namespace {

nlohmann::ordered_json report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["exact_match_rate"] = r.exact_match_rate;
  j["effort_saved"] = r.effort_saved;
  j["coverage"] = r.coverage;
  j["avg_suggestion_length"] = r.avg_suggestion_length;
  j["source_mix"] = {{"global", r.global_percent}, {"local", r.local_percent}, {"char", r.char_percent}};
  j["calls"] = r.calls;
  j["gated"] = r.gated;
  j["matched"] = r.matched;
  j["accepted"] = r.accepted;
  j["total_chars"] = r.total_chars;
  return j;
}

}  // namespace

std::string to_json(const EvalReport& report) { return report_json(report).dump(2); }

std::string to_json(const GridResult& grid) {
  nlohmann::ordered_json j;
  j["best_alpha"] = grid.best_alpha;
  j["per_alpha"] = nlohmann::ordered_json::array();
  for (const AlphaResult& r : grid.per_alpha) {
    nlohmann::ordered_json row;
    row["alpha"] = r.alpha;
    row["threshold"] = r.threshold;
    row["report"] = report_json(r.report);
    j["per_alpha"].push_back(std::move(row));
  }
  return j.dump(2);
}

std::string format_table(std::span<const std::pair<std::string, EvalReport>> rows) {
  std::size_t label_width = 5;
  for (const auto& [label, r] : rows) label_width = std::max(label_width, label.size());
  const int w = static_cast<int>(label_width);

  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %8s  %12s  %8s  %10s  %7s  %7s  %7s\n", w, "Model",
                "EMR", "Effort saved", "Coverage", "Avg length", "Global%", "Local%", "Char%");
  out += line;
  for (const auto& [label, r] : rows) {
    std::snprintf(line, sizeof line, "%-*s  %8.2f  %12.2f  %8.2f  %10.2f  %7.1f  %7.1f  %7.1f\n", w,
                  label.c_str(), r.exact_match_rate, r.effort_saved, r.coverage,
                  r.avg_suggestion_length, r.global_percent, r.local_percent, r.char_percent);
    out += line;
  }
  return out;
}

}  // namespace autocompose::metrics
