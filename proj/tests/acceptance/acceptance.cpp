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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check compares against an independent reference or a
// directly measured quantity.

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "autocompose/charlm.hpp"
#include "autocompose/corpus.hpp"
#include "autocompose/decoder.hpp"
#include "autocompose/ensemble.hpp"
#include "autocompose/markov.hpp"
#include "autocompose/metrics.hpp"
#include "autocompose/service.hpp"
#include "autocompose/session.hpp"
#include "autocompose/simulation.hpp"
#include "autocompose/store.hpp"
#include "autocompose/utf8.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace autocompose;
using Clock = std::chrono::steady_clock;
using Seq = std::vector<std::string>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ------------------------------------------------------------------ markov

Outcome markov_oracle() {
  const auto started = Clock::now();
  std::mt19937 rng(2024);
  const Seq alphabet = {"a", "b", "c", "d", "e", "f"};
  std::size_t contexts_checked = 0;
  for (int corpus = 0; corpus < 100; ++corpus) {
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<Seq> seqs;
    std::size_t used = 0;
    while (used < 200) {
      Seq s{"<s>"};
      for (std::size_t i = 1 + rng() % 12; i > 0 && used < 200; --i, ++used) s.push_back(alphabet[rng() % alphabet.size()]);
      s.push_back("</s>");
      seqs.push_back(std::move(s));
    }
    const MarkovModel m = MarkovModel::train(seqs, k);
    const oracle::Tally tally = oracle::count_ngrams(seqs, k);
    if (m.context_count() != tally.size()) {
      return {false, fmt("corpus %d: %zu contexts, oracle %zu", corpus, m.context_count(), tally.size())};
    }
    for (const auto& [ctx, next] : tally) {
      const auto want = oracle::mle(tally, ctx);
      const Distribution got = static_cast<int>(ctx.size()) == k ? m.next_distribution(ctx) : m.distribution_for(ctx);
      if (got.size() != want.size()) return {false, fmt("corpus %d: support size differs", corpus)};
      double total = 0.0;
      for (const auto& [sym, p] : want) {
        if (got.probability(sym) != p) return {false, fmt("corpus %d: p(%s) differs", corpus, sym.c_str())};
        total += got.probability(sym);
      }
      if (std::abs(got.total() - 1.0) > 1e-9 || std::abs(total - 1.0) > 1e-9) {
        return {false, fmt("corpus %d: distribution sums to %.12f", corpus, got.total())};
      }
      ++contexts_checked;
    }
  }
  const double secs = seconds_since(started);
  return {secs < 10.0, fmt("100 corpora, %zu contexts exact, %.2f s (limit 10 s)", contexts_checked, secs)};
}

// ------------------------------------------------------------------ decoder

Outcome normalizer_values() {
  const double one = decoder::length_normalizer(1, 0.4);
  const double five = decoder::length_normalizer(5, 0.4);
  const double reference = std::exp(0.4 * (std::log(10.0) - std::log(6.0)));
  bool monotone = true;
  for (std::size_t len = 1; len < 50; ++len) {
    for (double a : {0.1, 0.4, 1.0, 2.0}) {
      monotone &= decoder::length_normalizer(len + 1, a) > decoder::length_normalizer(len, a);
    }
  }
  const bool pass = one == 1.0 && std::abs(five - reference) <= 1e-4 && std::abs(five - 1.2267) <= 1e-4 && monotone;
  return {pass, fmt("lp(1)=%.17g, lp(5)=%.6f (reference %.6f), monotone over 1..50: %s", one, five, reference,
                    monotone ? "yes" : "no")};
}

// ------------------------------------------------------------------ ensemble

Outcome ensemble_identities() {
  std::mt19937 rng(99);
  const Seq words = {"alpha", "beta", "gamma", "delta", "eps", "zeta"};
  std::size_t compared = 0;
  for (int corpus = 0; corpus < 50; ++corpus) {
    std::vector<Seq> user_notes, all_notes;
    for (int n = 0; n < 20; ++n) {
      Seq s{"<s>"};
      for (std::size_t i = 1 + rng() % 7; i > 0; --i) s.push_back(words[rng() % words.size()]);
      s.push_back("</s>");
      all_notes.push_back(s);
      if (n % 2 == 0) user_notes.push_back(s);
    }
    const auto global = std::make_shared<const MarkovModel>(MarkovModel::train(all_notes, 2));
    const auto local = std::make_shared<const MarkovModel>(MarkovModel::train(user_notes, 2));
    UserProfile user;
    user.user_id = "u";
    user.local = local;
    for (const Seq& src : user_notes) {
      const Seq prefix(src.begin(), src.begin() + 1 + static_cast<long>(rng() % (src.size() - 1)));
      for (double alpha : {1.0, 0.0}) {
        EnsembleConfig config;
        config.alpha_ensemble = alpha;
        const auto got = EnsembleModel(global, config).suggest_after_word(prefix, user);
        const auto want = decoder::top_n(alpha == 1.0 ? *global : *local, prefix, config.top_n);
        if (got.size() != want.size()) return {false, fmt("corpus %d alpha %.0f: list sizes differ", corpus, alpha)};
        for (std::size_t i = 0; i < got.size(); ++i) {
          if (got[i].tokens != want[i].tokens || std::abs(got[i].raw_logprob - want[i].raw_logprob) > 1e-12) {
            return {false, fmt("corpus %d alpha %.0f: '%s' vs '%s'", corpus, alpha, got[i].text().c_str(),
                               want[i].text().c_str())};
          }
        }
        ++compared;
      }
    }
  }
  return {true, fmt("50 corpora, %zu prefix/alpha pairs token-for-token", compared)};
}

// ------------------------------------------------------------------ metrics

Outcome calibration() {
  const auto raw = synthetic::make_blended({.users = 20, .tail_words = 1});
  const metrics::EvalCorpus corpus = synthetic::eval_corpus(raw);
  const std::size_t chars = corpus.total_chars();
  EnsembleConfig config;
  config.threshold = -std::numeric_limits<double>::infinity();
  const auto events = metrics::replay(corpus, config);
  std::vector<double> scores;
  for (const auto& e : events) {
    if (e.suggestion) scores.push_back(e.suggestion->normalized_score);
  }

  std::string hits;
  double worst = 0.0;
  for (double target : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const double t = metrics::calibrate_threshold(scores, chars, target, 0.1);
    const double got = metrics::coverage(metrics::apply_threshold(events, t), chars);
    worst = std::max(worst, std::abs(got - target));
    hits += fmt("%s%.1f->%.3f", hits.empty() ? "" : ", ", target, got);
  }

  std::set<double> cuts(scores.begin(), scores.end());
  cuts.insert(std::numeric_limits<double>::infinity());
  cuts.insert(-std::numeric_limits<double>::infinity());
  bool monotone = true;
  double last = std::numeric_limits<double>::infinity();
  for (double t : cuts) {
    const double c = metrics::coverage(metrics::apply_threshold(events, t), chars);
    monotone &= c <= last;
    last = c;
  }
  const bool pass = chars >= 5000 && worst <= 0.1 && monotone;
  return {pass, fmt("%zu chars; coverage %s (max error %.3f, tolerance 0.1); sweep over %zu cuts monotone: %s", chars,
                    hits.c_str(), worst, cuts.size(), monotone ? "yes" : "no")};
}

Outcome alpha_grid() {
  const auto started = Clock::now();
  const auto raw = synthetic::make_blended({.users = 20, .tail_words = 1});
  const metrics::EvalCorpus corpus = synthetic::eval_corpus(raw);
  const std::vector<double> alphas = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const metrics::GridResult a = metrics::alpha_grid_search(corpus, alphas, 5.0, 0.1, {}, {}, 2);
  const metrics::GridResult b = metrics::alpha_grid_search(corpus, alphas, 5.0, 0.1, {}, {}, 1);
  bool same = a.best_alpha == b.best_alpha;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    same &= a.per_alpha[i].report == b.per_alpha[i].report && a.per_alpha[i].threshold == b.per_alpha[i].threshold;
  }
  std::string table;
  bool on_target = true;
  for (const auto& r : a.per_alpha) {
    on_target &= std::abs(r.report.coverage - 5.0) <= 0.1;
    table += fmt("%s%.1f:%.1f", table.empty() ? "" : " ", r.alpha, r.report.exact_match_rate);
  }
  const double edge = std::max(a.per_alpha.front().report.exact_match_rate, a.per_alpha.back().report.exact_match_rate);
  double interior = -1.0;
  for (std::size_t i = 1; i + 1 < alphas.size(); ++i) interior = std::max(interior, a.per_alpha[i].report.exact_match_rate);
  const double secs = seconds_since(started);
  const bool pass = interior > edge && same && on_target && secs < 60.0;
  return {pass, fmt("EMR by alpha at 5%% coverage {%s}; best %.1f; deterministic: %s; %.2f s", table.c_str(),
                    a.best_alpha, same ? "yes" : "no", secs)};
}

// ------------------------------------------------------------------ cascade

Outcome cascade_gain() {
  const auto raw = synthetic::make_blended({.users = 12});
  const metrics::EvalCorpus corpus = synthetic::eval_corpus(raw);
  std::vector<std::string> texts;
  for (const auto& n : raw.train) texts.push_back(corpus::normalize_text(n.text));
  const charlm::CharModel chars = charlm::train_char(texts, 6);
  const EnsembleModel model(corpus.global, EnsembleConfig{});

  // Does the character model complete any held-out word from two letters?
  std::size_t covered = 0;
  for (const auto& note : corpus.notes) {
    std::string context;
    for (const std::string& w : note.tokens) {
      if (utf8::length(w) > 2) {
        const auto cps = utf8::code_points(w);
        const std::string typed = cps[0] + cps[1];
        if (auto s = chars.complete_word(context, typed); s && typed + s->text() == w) ++covered;
      }
      context += w + " ";
    }
  }
  const auto word = simulation::simulate(model, corpus.users, nullptr, corpus.notes, simulation::word_only());
  const auto full = simulation::simulate(model, corpus.users, &chars, corpus.notes, {});
  const double w = metrics::effort_saved(word.events, word.total_chars);
  const double f = metrics::effort_saved(full.events, full.total_chars);
  const bool pass = covered > 0 ? f > w : f >= w;
  return {pass, fmt("effort saved word-only %.2f%%, full cascade %.2f%% (%+.0f%% relative); char model completes %zu held-out words",
                    w, f, w > 0 ? 100.0 * (f - w) / w : 0.0, covered)};
}

struct SpyPredictor final : session::WordPredictor {
  std::vector<Suggestion> reply;
  mutable std::size_t calls = 0;
  mutable std::size_t last_n = 0;
  std::vector<Suggestion> suggest(std::span<const std::string>, std::size_t n) const override {
    ++calls;
    last_n = n;
    std::vector<Suggestion> out = reply;
    if (out.size() > n) out.resize(n);
    return out;
  }
};

struct SpyCompleter final : session::WordCompleter {
  std::optional<Suggestion> reply;
  mutable std::size_t calls = 0;
  std::optional<Suggestion> complete(std::string_view, std::string_view) const override {
    ++calls;
    return reply;
  }
};

Suggestion suggestion_of(const std::string& text, double score) {
  Suggestion s;
  std::istringstream in(text);
  for (std::string w; std::getline(in, w, ' ');) s.tokens.push_back(w);
  s.normalized_score = score;
  s.gated = true;
  return s;
}

Outcome cache_conformance() {
  std::mt19937 rng(1234);
  const Seq words = {"up", "upload", "uploading", "Up", "the", "then", "th", "thank", "you", "your", "café", "doc", "documents"};
  const std::vector<double> scores = {-0.1, -0.3, -0.3, -0.7, -1.2};
  std::size_t matched = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<Suggestion> cache;
    std::vector<oracle::Candidate> plain;
    for (std::size_t i = rng() % 6; i > 0; --i) {
      std::string text = words[rng() % words.size()];
      for (std::size_t w = rng() % 3; w > 0; --w) text += " " + words[rng() % words.size()];
      const double score = scores[rng() % scores.size()];
      cache.push_back(suggestion_of(text, score));
      plain.push_back({text, score});
    }
    std::sort(cache.begin(), cache.end(), decoder::ranks_before);
    plain.clear();
    for (const auto& s : cache) plain.push_back({s.text(), s.normalized_score});
    std::string typed = words[rng() % words.size()];
    typed = typed.substr(0, 1 + rng() % typed.size());
    const auto got = session::prefix_match(cache, typed);
    const auto want = oracle::prefix_match(plain, typed);
    if (got.has_value() != want.has_value() || (got && (got->remainder != want->remainder ||
                                                        got->suggestion.normalized_score != plain[want->index].score))) {
      return {false, fmt("trial %d: typed '%s' disagrees with the oracle", trial, typed.c_str())};
    }
    matched += got.has_value();
  }

  // Stage ordering, observed through call counts.
  std::string order_failure;
  auto expect = [&](bool ok, const char* what) {
    if (!ok && order_failure.empty()) order_failure = what;
  };
  const std::vector<Suggestion> two = {suggestion_of("uploading the documents", -0.4), suggestion_of("the update", -0.5)};
  {
    SpyPredictor p;
    SpyCompleter c;
    session::TypingState s = session::state_from_text("thank you for u");
    s.cache = session::SuggestionCache{session::anchor_tokens(s.anchor_text()), two, 0};
    const auto hit = session::on_char(s, p, &c);
    expect(hit && hit->stage == session::Stage::cache && p.calls == 0 && c.calls == 0, "cache hit");
  }
  {
    SpyPredictor p;
    SpyCompleter c;
    session::TypingState s = session::state_from_text("thank you for x");
    s.cache = session::SuggestionCache{session::anchor_tokens(s.anchor_text()), two, 0};
    expect(!session::on_char(s, p, &c) && p.calls == 0 && c.calls == 0, "one-character miss");
  }
  {
    SpyPredictor p;
    SpyCompleter c;
    p.reply = {suggestion_of("xylophone", -0.2)};
    session::TypingState s = session::state_from_text("thank you for xy");
    s.cache = session::SuggestionCache{session::anchor_tokens(s.anchor_text()), two, 0};
    const auto hit = session::on_char(s, p, &c);
    expect(hit && hit->stage == session::Stage::rematch && p.calls == 1 && p.last_n == 3 && c.calls == 0, "rematch");
  }
  {
    SpyPredictor p;
    SpyCompleter c;
    c.reply = suggestion_of("lophone", -0.2);
    session::TypingState s = session::state_from_text("thank you for xy");
    s.cache = session::SuggestionCache{session::anchor_tokens(s.anchor_text()), two, 0};
    const auto hit = session::on_char(s, p, &c);
    expect(hit && hit->stage == session::Stage::character && p.calls == 1 && c.calls == 1, "character fallback");
  }
  const bool pass = order_failure.empty();
  return {pass, fmt("10000 fuzzed pairs agree with the linear scan (%zu matches); stage spies: %s", matched,
                    pass ? "cache, rematch, char in order" : ("failed at " + order_failure).c_str())};
}

// ------------------------------------------------------------------ real corpus

struct DeskModels {
  std::vector<corpus::RawNote> train;
  std::vector<metrics::HeldOutNote> held_out;
  std::shared_ptr<const MarkovModel> global;
  std::shared_ptr<const charlm::CharModel> chars;
  std::unordered_map<std::string, UserProfile> users;
  std::uintmax_t corpus_bytes = 0;
  double train_seconds = 0.0;
};

DeskModels train_desk_models() {
  const std::filesystem::path path = std::filesystem::path(AUTOCOMPOSE_CORPUS_DIR) / "shakespeare_notes.ndjson";
  DeskModels d;
  d.corpus_bytes = std::filesystem::file_size(path);
  const auto started = Clock::now();
  auto loaded = corpus::load_corpus(path);
  std::vector<corpus::TokenSequence> seqs;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < loaded.notes.size(); ++i) {
    if (i % 20 == 19) {
      d.held_out.push_back(metrics::make_held_out(loaded.notes[i].user_id, loaded.notes[i].text));
      continue;
    }
    texts.push_back(corpus::normalize_text(loaded.notes[i].text));
    seqs.push_back(corpus::tokenize_words(texts.back()));
    d.train.push_back(std::move(loaded.notes[i]));
  }
  d.global = std::make_shared<const MarkovModel>(MarkovModel::train(seqs, 2));
  d.chars = std::make_shared<const charlm::CharModel>(charlm::train_char(texts, 6));
  const Timestamp now = corpus::latest_timestamp(d.train);
  for (const std::string& id : corpus::user_ids(d.train)) {
    UserProfile p;
    p.user_id = id;
    p.local = std::make_shared<const MarkovModel>(MarkovModel::train(corpus::build_user_window(d.train, id, 90, now), 2));
    d.users.emplace(id, std::move(p));
  }
  d.train_seconds = seconds_since(started);
  return d;
}

Outcome suggest_latency(const DeskModels& d) {
  TempDir dir;
  AppConfig config;
  config.store_root = dir / "store";
  service::Service svc(config);
  svc.install_global(d.global, 1);
  svc.install_char(d.chars, 1);
  for (const auto& [id, p] : d.users) svc.install_user(p, 1);

  service::HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  if (port <= 0) return {false, "cannot bind a local port"};
  std::thread listener([&] { server.listen(); });
  while (!server.running()) std::this_thread::yield();

  httplib::Client client("127.0.0.1", port);
  client.set_keep_alive(true);
  client.set_tcp_nodelay(true);
  client.set_read_timeout(5, 0);
  std::mt19937 rng(77);
  std::vector<double> wall, inside;
  std::size_t shown = 0, failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& note = d.held_out[rng() % d.held_out.size()];
    const auto cps = utf8::code_points(note.text);
    if (cps.size() < 2) {
      --i;
      continue;
    }
    const std::size_t cut = 1 + rng() % (cps.size() - 1);
    std::string text;
    for (std::size_t k = 0; k < cut; ++k) text += cps[k];
    const bool boundary = cps[cut - 1] == " ";
    nlohmann::json body{{"user_id", note.user_id}, {"text", text}, {"trigger", boundary ? "word_boundary" : "char"}};
    const auto t0 = Clock::now();
    auto res = client.Post("/v1/suggest", body.dump(), "application/json");
    wall.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    if (!res || res->status != 200) {
      ++failures;
      continue;
    }
    const auto j = nlohmann::json::parse(res->body);
    inside.push_back(j["latency_ms"].get<double>());
    shown += !j["display"].is_null();
  }
  server.stop();
  listener.join();
  const double p99 = percentile(wall, 99.0);
  return {failures == 0 && p99 < 100.0,
          fmt("10000 requests over HTTP: P50 %.2f ms, P99 %.2f ms (limit 100, target 10); in-handler P99 %.2f ms; "
              "%zu shown; %zu errors; models from %.2f MB corpus",
              percentile(wall, 50.0), p99, percentile(inside, 99.0), shown, failures,
              static_cast<double>(d.corpus_bytes) / 1e6)};
}

Outcome complete_word_latency(const DeskModels& d) {
  std::mt19937 rng(78);
  std::vector<double> times;
  std::size_t completed = 0;
  while (times.size() < 10000) {
    const auto& note = d.held_out[rng() % d.held_out.size()];
    if (note.tokens.empty()) continue;
    const std::size_t w = rng() % note.tokens.size();
    const auto cps = utf8::code_points(note.tokens[w]);
    if (cps.size() < 3) continue;
    std::string context;
    for (std::size_t i = 0; i < w; ++i) context += note.tokens[i] + " ";
    std::string typed;
    for (std::size_t i = 0; i < 2 + rng() % (cps.size() - 2); ++i) typed += cps[i];
    const auto t0 = Clock::now();
    const auto s = d.chars->complete_word(context, typed);
    times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    completed += s.has_value();
  }
  const double p99 = percentile(times, 99.0);
  return {p99 < 40.0, fmt("10000 calls: P50 %.4f ms, P99 %.4f ms (limit 40); %zu completions", percentile(times, 50.0),
                          p99, completed)};
}

Outcome replay_determinism(const DeskModels& d) {
  const EnsembleModel model(d.global, EnsembleConfig{});
  const std::vector<metrics::HeldOutNote> notes(d.held_out.begin(), d.held_out.begin() + 60);
  const auto first = simulation::simulate(model, d.users, d.chars.get(), notes, {});
  const auto second = simulation::simulate(model, d.users, d.chars.get(), notes, {});
  const bool transcripts = first.transcript == second.transcript;

  TempDir dir;
  store::ModelStore s(dir.path());
  bool bytes = true;
  auto round_trip = [&](const store::ModelKey& key, const MarkovModel& m) {
    s.save_model(key, m);
    const std::string written = slurp(s.model_path(key));
    const MarkovModel back = s.load_model(key);
    s.save_model(key, back);
    bytes &= written == serialize(m) && slurp(s.model_path(key)) == written && back == m;
  };
  round_trip(store::ModelKey::global(), *d.global);
  round_trip(store::ModelKey::character(), d.chars->inner());
  round_trip(store::ModelKey::user(d.users.begin()->first), *d.users.begin()->second.local);
  return {transcripts && bytes, fmt("simulate x2 on %zu notes: %zu transcript lines %s; store round trips (global, char, user) %s",
                                    notes.size(), first.transcript.size(), transcripts ? "identical" : "DIFFER",
                                    bytes ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main() {
  int failures = 0;
  auto run = [&](const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  };

  run("markov oracle equivalence", markov_oracle);
  run("normalizer values", normalizer_values);
  run("ensemble identities", ensemble_identities);
  run("fixed-coverage calibration", calibration);
  run("alpha grid shape", alpha_grid);
  run("cascade gain", cascade_gain);
  run("cache conformance", cache_conformance);

  std::optional<DeskModels> desk;
  try {
    desk = train_desk_models();
    std::printf("      desk models: %zu training notes, %zu held out, %zu users, trained in %.1f s\n", desk->train.size(),
                desk->held_out.size(), desk->users.size(), desk->train_seconds);
  } catch (const std::exception& e) {
    std::printf("      cannot train desk models: %s\n", e.what());
  }
  auto with_desk = [&](Outcome (*f)(const DeskModels&)) {
    return [&, f]() -> Outcome {
      if (!desk) return {false, "desk models unavailable"};
      return f(*desk);
    };
  };
  run("suggest latency", with_desk(suggest_latency));
  run("complete_word latency", with_desk(complete_word_latency));
  run("replay determinism", with_desk(replay_determinism));

  std::printf("%s: %d failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
