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

#include "commands.hpp"

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "autocompose/charlm.hpp"
#include "autocompose/config.hpp"
#include "autocompose/corpus.hpp"
#include "autocompose/errors.hpp"
#include "autocompose/metrics.hpp"
#include "autocompose/service.hpp"
#include "autocompose/simulation.hpp"
#include "autocompose/store.hpp"

namespace autocompose::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by the subcommands that read the config file.
struct Common {
  std::optional<fs::path> config_file;
  std::optional<double> alpha;
  std::optional<double> threshold;
  std::optional<std::size_t> top_n;
  std::optional<unsigned> threads;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--config", config_file, "JSON config file");
    cmd.add_option("--alpha", alpha, "Weight of the global model")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--threshold", threshold, "Suggestion gate on the normalized score");
    cmd.add_option("--top-n", top_n, "Candidates per word boundary")->check(CLI::PositiveNumber);
    cmd.add_option("--threads", threads, "Worker threads (0: all cores)");
  }

  AppConfig load() const {
    if (config_file && !fs::exists(*config_file)) {
      throw UsageError("config file not found: " + config_file->string());
    }
    AppConfig config;
    try {
      config = load_config(config_file, process_env());
    } catch (const InvalidParameter& e) {
      throw UsageError(e.what());
    }
    if (alpha) config.ensemble.alpha_ensemble = *alpha;
    if (threshold) config.ensemble.threshold = *threshold;
    if (top_n) config.ensemble.top_n = *top_n;
    if (threads) config.threads = *threads;
    try {
      config.validate();
    } catch (const InvalidParameter& e) {
      throw UsageError(e.what());
    }
    return config;
  }
};

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

corpus::LoadResult read_corpus(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw UsageError("corpus not found: " + path.string());
  return corpus::load_corpus(path);
}

Timestamp resolve_now(const std::string& now, const std::vector<corpus::RawNote>& notes) {
  if (now == "latest") return corpus::latest_timestamp(notes);
  if (now == "clock") return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  try {
    return parse_rfc3339(now);
  } catch (const CorpusError& e) {
    throw UsageError(std::string("--now: ") + e.what());
  }
}

std::string note_json(const corpus::RawNote& note) {
  nlohmann::ordered_json j;
  j["user_id"] = note.user_id;
  j["created_at"] = format_rfc3339(note.created_at);
  j["text"] = note.text;
  return j.dump();
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  fs::path corpus;
  fs::path out;
  int order = 2;
  int char_order = 6;
  int window_days = 90;
  std::string now = "latest";
  std::size_t holdout_every = 0;
};

int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  if (args.order < 1) throw UsageError("--order must be >= 1");
  if (args.char_order < 1) throw UsageError("--char-order must be >= 1");
  if (args.window_days < 1) throw UsageError("--window-days must be >= 1");
  if (args.holdout_every == 1) throw UsageError("--holdout-every must be 0 or >= 2");

  corpus::LoadResult loaded = read_corpus(args.corpus);
  std::vector<corpus::RawNote> train_notes;
  std::vector<corpus::RawNote> held_out;
  for (std::size_t i = 0; i < loaded.notes.size(); ++i) {
    const bool hold = args.holdout_every >= 2 && i % args.holdout_every == args.holdout_every - 1;
    (hold ? held_out : train_notes).push_back(std::move(loaded.notes[i]));
  }
  if (train_notes.empty()) err << "warning: corpus has no notes; writing empty models\n";
  if (loaded.skipped_empty > 0) err << "warning: skipped " << loaded.skipped_empty << " empty notes\n";

  const Timestamp now = resolve_now(args.now, train_notes);
  std::vector<corpus::TokenSequence> sequences;
  std::vector<std::string> texts;
  sequences.reserve(train_notes.size());
  texts.reserve(train_notes.size());
  for (const corpus::RawNote& note : train_notes) {
    texts.push_back(corpus::normalize_text(note.text));
    sequences.push_back(corpus::tokenize_words(texts.back()));
  }

  store::ModelStore store(args.out);
  const MarkovModel global = MarkovModel::train(sequences, args.order);
  const store::Version gv = store.save_model(store::ModelKey::global(), global);
  const charlm::CharModel chars = charlm::train_char(texts, args.char_order);
  const store::Version cv = store.save_model(store::ModelKey::character(), chars.inner());

  std::size_t user_models = 0;
  std::size_t windowed_notes = 0;
  for (const std::string& id : corpus::user_ids(train_notes)) {
    std::vector<corpus::TokenSequence> window =
        corpus::build_user_window(train_notes, id, args.window_days, now);
    windowed_notes += window.size();
    store.save_model(store::ModelKey::user(id), MarkovModel::train(window, args.order));
    ++user_models;
  }

  if (!held_out.empty()) {
    std::ofstream f(args.out / "holdout.ndjson");
    for (const corpus::RawNote& note : held_out) f << note_json(note) << '\n';
    if (!f) throw IoError("cannot write " + (args.out / "holdout.ndjson").string());
  }

  out << "notes            " << train_notes.size() << '\n'
      << "held out         " << held_out.size() << '\n'
      << "global model     v" << gv << "  k=" << args.order << "  tokens=" << global.token_count()
      << "  contexts=" << global.context_count() << "  vocabulary=" << global.vocabulary_size() << '\n'
      << "char model       v" << cv << "  k=" << args.char_order
      << "  contexts=" << chars.inner().context_count() << '\n'
      << "user models      " << user_models << "  (" << windowed_notes << " notes in "
      << args.window_days << "-day windows ending " << format_rfc3339(now) << ")\n"
      << "store            " << store.root().string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- shared model loading

struct LoadedModels {
  std::shared_ptr<const MarkovModel> global;
  std::shared_ptr<const charlm::CharModel> chars;
  std::unordered_map<std::string, UserProfile> users;
};

LoadedModels load_models(const fs::path& root, const AppConfig& config,
                         const std::vector<std::string>& user_ids) {
  store::ModelStore store(root);
  if (!store.has_model(store::ModelKey::global())) {
    throw UsageError("no models in " + root.string() + "; run `autocompose train` first");
  }
  LoadedModels m;
  m.global = std::make_shared<const MarkovModel>(store.load_model(store::ModelKey::global()));
  if (store.has_model(store::ModelKey::character())) {
    m.chars = std::make_shared<const charlm::CharModel>(store.load_model(store::ModelKey::character()),
                                                        config.char_options);
  }
  for (const std::string& id : user_ids) {
    UserProfile profile;
    profile.user_id = id;
    profile.window_days = config.window_days;
    const store::ModelKey key = store::ModelKey::user(id);
    if (store.has_model(key)) profile.local = std::make_shared<const MarkovModel>(store.load_model(key));
    m.users.emplace(id, std::move(profile));
  }
  return m;
}

std::vector<metrics::HeldOutNote> held_out_notes(const std::vector<corpus::RawNote>& notes,
                                                 std::size_t limit) {
  std::vector<metrics::HeldOutNote> out;
  for (const corpus::RawNote& note : notes) {
    if (limit > 0 && out.size() >= limit) break;
    out.push_back(metrics::make_held_out(note.user_id, note.text));
  }
  return out;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  fs::path corpus;
  fs::path models;
  std::vector<double> alphas{0.2, 0.4, 0.6, 0.8};
  double target_coverage = 5.0;
  double tolerance = 0.1;
  std::optional<fs::path> report;
  std::size_t notes = 0;
  std::size_t min_context_words = 0;
  std::size_t stride = 1;
  Common common;
};

int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  const AppConfig config = args.common.load();
  if (args.target_coverage < 0.0) throw UsageError("--target-coverage must be >= 0");
  if (args.tolerance < 0.0) throw UsageError("--tolerance must be >= 0");
  if (args.stride < 1) throw UsageError("--stride must be >= 1");

  corpus::LoadResult loaded = read_corpus(args.corpus);
  metrics::EvalCorpus eval;
  eval.notes = held_out_notes(loaded.notes, args.notes);
  if (eval.notes.empty()) throw UsageError("evaluation corpus has no notes");
  LoadedModels models = load_models(args.models, config, corpus::user_ids(loaded.notes));
  eval.global = models.global;
  eval.users = std::move(models.users);

  metrics::SlicePolicy policy;
  policy.min_context_words = args.min_context_words;
  policy.stride = args.stride;
  const unsigned threads = worker_count(config.threads);

  std::vector<std::pair<std::string, metrics::EvalReport>> rows;
  std::vector<metrics::AlphaResult> results;
  for (double alpha : args.alphas) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw UsageError("alpha values must lie in [0, 1]");
    try {
      const double one[] = {alpha};
      metrics::GridResult g = metrics::alpha_grid_search(eval, one, args.target_coverage, args.tolerance,
                                                         config.ensemble, policy, threads);
      results.push_back(g.per_alpha.front());
      rows.emplace_back("alpha=" + fixed(alpha, 2) + " thr=" + fixed(g.per_alpha.front().threshold, 4),
                        g.per_alpha.front().report);
    } catch (const CalibrationFailure& e) {
      err << "alpha " << fixed(alpha) << ": calibration failed: " << e.what() << '\n';
    }
  }
  if (results.empty()) {
    err << "error: no alpha reached the target coverage\n";
    return kExitFailure;
  }

  metrics::GridResult grid;
  grid.per_alpha = results;
  const metrics::AlphaResult* best = &results.front();
  for (const metrics::AlphaResult& r : results) {
    if (r.report.exact_match_rate > best->report.exact_match_rate ||
        (r.report.exact_match_rate == best->report.exact_match_rate && r.alpha < best->alpha)) {
      best = &r;
    }
  }
  grid.best_alpha = best->alpha;

  out << metrics::format_table(rows);
  out << "best alpha " << fixed(grid.best_alpha) << " (coverage target " << fixed(args.target_coverage)
      << ", " << eval.notes.size() << " notes, " << eval.total_chars() << " chars)\n";
  if (args.report) {
    std::ofstream f(*args.report);
    f << metrics::to_json(grid) << '\n';
    if (!f) throw IoError("cannot write " + args.report->string());
  }
  return results.size() == args.alphas.size() ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  fs::path corpus;
  fs::path models;
  std::size_t notes = 0;
  std::optional<fs::path> transcript;
  Common common;
};

int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream&) {
  const AppConfig config = args.common.load();
  corpus::LoadResult loaded = read_corpus(args.corpus);
  const std::vector<metrics::HeldOutNote> notes = held_out_notes(loaded.notes, args.notes);
  LoadedModels models = load_models(args.models, config, corpus::user_ids(loaded.notes));
  const EnsembleModel ensemble(models.global, config.ensemble);

  const simulation::SimulationResult word =
      simulation::simulate(ensemble, models.users, models.chars.get(), notes, simulation::word_only());
  const simulation::SimulationResult full =
      simulation::simulate(ensemble, models.users, models.chars.get(), notes, session::CascadeOptions{});

  if (args.transcript) {
    std::ofstream f(*args.transcript, std::ios::binary);
    for (const std::string& line : full.transcript) f << line << '\n';
    if (!f) throw IoError("cannot write " + args.transcript->string());
  }

  auto saved = [](const simulation::SimulationResult& r) {
    return r.total_chars == 0 ? 0.0 : metrics::effort_saved(r.events, r.total_chars);
  };
  std::size_t accepted_word = 0;
  std::size_t accepted_full = 0;
  for (const auto& e : word.events) accepted_word += e.accepted;
  for (const auto& e : full.events) accepted_full += e.accepted;
  out << "notes               " << full.notes << " (" << full.skipped_notes << " empty skipped)\n"
      << "characters          " << full.total_chars << '\n'
      << "effort saved        word-only " << fixed(saved(word)) << "%  (" << accepted_word
      << " accepted)\n"
      << "                    full cascade " << fixed(saved(full)) << "%  (" << accepted_full
      << " accepted)\n"
      << "keystrokes          word-only " << word.keystrokes << "  full cascade " << full.keystrokes << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  Common common;
  std::optional<std::string> host;
  std::optional<int> port;
  std::optional<fs::path> store;
  std::optional<fs::path> corpus;
};

int run_serve(const ServeArgs& args, std::ostream& out, std::ostream& err) {
  AppConfig config = args.common.load();
  if (args.host) config.host = *args.host;
  if (args.port) config.port = *args.port;
  if (args.store) config.store_root = *args.store;
  if (args.corpus) config.corpus = *args.corpus;

  service::Service svc(config);
  if (!svc.load_models()) {
    err << "error: no global model under " << (config.store_root / "models").string()
        << "; run `autocompose train --corpus <notes.ndjson> --out " << config.store_root.string()
        << "` first\n";
    return kExitFailure;
  }

  // Handle SIGINT/SIGTERM on a dedicated thread; the server threads inherit
  // the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  service::HttpServer server(svc);
  const int port = server.bind(config.host, config.port);
  if (port < 0) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    err << "error: cannot bind " << config.host << ':' << config.port << '\n';
    return kExitFailure;
  }
  out << "listening on http://" << config.host << ':' << port << std::endl;

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    const timespec tick{0, 200'000'000};
    while (!done) {
      if (sigtimedwait(&signals, nullptr, &tick) > 0) {
        server.stop();
        return;
      }
    }
  });
  const bool ok = server.listen();
  done = true;
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "stopped" << std::endl;
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Personalized next-words suggestions: training, evaluation and serving", "autocompose"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "autocompose 0.1.0");

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train global, character and per-user models");
  train_cmd->add_option("--corpus", train.corpus, "NDJSON notes")->required();
  train_cmd->add_option("--out", train.out, "Model store directory")->required();
  train_cmd->add_option("--order", train.order, "Word model order")->capture_default_str();
  train_cmd->add_option("--char-order", train.char_order, "Character model order")->capture_default_str();
  train_cmd->add_option("--window-days", train.window_days, "Per-user training window")->capture_default_str();
  train_cmd->add_option("--now", train.now, "Window end: latest, clock or an RFC 3339 time")
      ->capture_default_str();
  train_cmd->add_option("--holdout-every", train.holdout_every,
                        "Keep every n-th note out of training and write it to <out>/holdout.ndjson");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Fixed-coverage evaluation over an alpha grid");
  eval_cmd->add_option("--corpus", eval.corpus, "Held-out NDJSON notes")->required();
  eval_cmd->add_option("--models", eval.models, "Model store directory")->required();
  eval_cmd->add_option("--alpha-grid", eval.alphas, "Comma-separated alphas")->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--target-coverage", eval.target_coverage)->capture_default_str();
  eval_cmd->add_option("--tolerance", eval.tolerance)->capture_default_str();
  eval_cmd->add_option("--report", eval.report, "Write the JSON report here");
  eval_cmd->add_option("--notes", eval.notes, "Use only the first N notes (0: all)");
  eval_cmd->add_option("--min-context-words", eval.min_context_words);
  eval_cmd->add_option("--stride", eval.stride, "Query every n-th word boundary");
  eval.common.add_to(*eval_cmd);

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Type held-out notes through the suggestion cascade");
  sim_cmd->add_option("--corpus", sim.corpus, "Held-out NDJSON notes")->required();
  sim_cmd->add_option("--models", sim.models, "Model store directory")->required();
  sim_cmd->add_option("--notes", sim.notes, "Use only the first N notes (0: all)");
  sim_cmd->add_option("--transcript", sim.transcript, "Write the keystroke transcript (NDJSON)");
  sim.common.add_to(*sim_cmd);

  ServeArgs serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve.common.add_to(*serve_cmd);
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port);
  serve_cmd->add_option("--store", serve.store, "Model store directory");
  serve_cmd->add_option("--corpus", serve.corpus, "Corpus used by the train endpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) return run_train(train, out, err);
    if (*eval_cmd) return run_eval(eval, out, err);
    if (*sim_cmd) return run_simulate(sim, out, err);
    if (*serve_cmd) return run_serve(serve, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace autocompose::cli
