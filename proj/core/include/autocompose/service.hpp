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

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <deque>
#include <unordered_set>
#include <vector>

#include "autocompose/charlm.hpp"
#include "autocompose/config.hpp"
#include "autocompose/corpus.hpp"
#include "autocompose/ensemble.hpp"
#include "autocompose/store.hpp"

namespace autocompose::service {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Request handling for the /v1 API, independent of the HTTP transport.
///
///   POST /v1/suggest          {"user_id","text","trigger":"word_boundary"|"char","n"?}
///   POST /v1/feedback         {"request_id","user_id","action","suggestion",...}
///   POST /v1/users/{id}/train
///   GET  /v1/health
///
/// Model snapshots are immutable; installing a new one swaps a shared
/// pointer, so requests in flight finish on the version they started with.
class Service {
 public:
  explicit Service(AppConfig config);

  /// Loads global and char models from the store (and the corpus, if
  /// configured). Returns false, leaving the service degraded, when the
  /// global model is missing.
  bool load_models();

  void install_global(std::shared_ptr<const MarkovModel> model, store::Version version);
  void install_char(std::shared_ptr<const charlm::CharModel> model, store::Version version);
  void install_user(UserProfile profile, store::Version version);
  void set_corpus(std::vector<corpus::RawNote> notes);

  bool ready() const;

  HttpResponse handle_suggest(std::string_view body);
  HttpResponse handle_feedback(std::string_view body);
  HttpResponse handle_train(std::string_view user_id);
  HttpResponse handle_health() const;

  const AppConfig& config() const noexcept { return config_; }
  store::ModelStore& model_store() noexcept { return store_; }

  /// Local model snapshot for a user (loading it from the store on first
  /// use); users without a model get an empty profile.
  std::shared_ptr<const UserProfile> user(const std::string& user_id);

 private:
  struct Snapshot {
    std::shared_ptr<const EnsembleModel> ensemble;
    std::shared_ptr<const charlm::CharModel> chars;
    store::Version global_version = 0;
    store::Version char_version = 0;
  };

  Snapshot snapshot() const;
  std::string next_request_id();
  void remember_request(const std::string& id);
  bool known_request(const std::string& id) const;
  std::mutex& train_mutex(const std::string& user_id);
  Timestamp window_now() const;

  AppConfig config_;
  store::ModelStore store_;

  mutable std::shared_mutex models_mutex_;
  std::shared_ptr<const MarkovModel> global_markov_;
  Snapshot snapshot_;
  std::unordered_map<std::string, std::shared_ptr<const UserProfile>> users_;
  std::unordered_map<std::string, store::Version> user_versions_;

  mutable std::mutex corpus_mutex_;
  std::vector<corpus::RawNote> corpus_;
  bool corpus_available_ = false;

  std::mutex train_mutexes_guard_;
  std::unordered_map<std::string, std::unique_ptr<std::mutex>> train_mutexes_;

  std::atomic<std::uint64_t> request_counter_{0};
  mutable std::mutex requests_mutex_;
  std::unordered_set<std::string> recent_requests_;
  std::deque<std::string> recent_order_;
};

/// HTTP/1.1 transport for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port or
  /// -1 on failure.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Requires a successful bind().
  bool listen();

  /// Stops accepting connections and waits for in-flight requests.
  void stop();

  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace autocompose::service
