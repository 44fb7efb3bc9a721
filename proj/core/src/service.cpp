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

#include "autocompose/service.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <random>

#include <json.hpp>

#include "autocompose/errors.hpp"
#include "autocompose/remote_lm.hpp"
#include "autocompose/session.hpp"
#include "autocompose/utf8.hpp"

namespace autocompose::service {
namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kMaxCandidates = 50;
constexpr std::size_t kRememberedRequests = 100000;

HttpResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, std::string_view message) {
  json body;
  body["error"] = message;
  return json_response(status, body);
}

json candidate_json(const Suggestion& s, std::string text) {
  json c;
  c["text"] = std::move(text);
  c["normalized_score"] = s.normalized_score;
  c["source"] = to_string(s.source);
  c["gated"] = s.gated;
  return c;
}

std::string instance_prefix() {
  std::random_device rd;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", rd());
  return buf;
}

}  // namespace

Service::Service(AppConfig config) : config_(std::move(config)), store_(config_.store_root) {
  config_.validate();
}

bool Service::load_models() {
  if (!config_.corpus.empty()) set_corpus(corpus::load_corpus(config_.corpus).notes);
  const store::ModelKey global = store::ModelKey::global();
  if (!store_.has_model(global)) return false;
  install_global(std::make_shared<const MarkovModel>(store_.load_model(global)),
                 store_.active_version(global).value_or(0));

  const store::ModelKey chars = store::ModelKey::character();
  if (store_.has_model(chars)) {
    install_char(std::make_shared<const charlm::CharModel>(store_.load_model(chars), config_.char_options),
                 store_.active_version(chars).value_or(0));
  }
  return true;
}

void Service::install_global(std::shared_ptr<const MarkovModel> model, store::Version version) {
  std::shared_ptr<const LanguageModel> lm = model;
  if (!config_.upstream_lm_url.empty()) {
    RemoteLmOptions options;
    options.timeout = std::chrono::milliseconds(config_.upstream_timeout_ms);
    lm = std::make_shared<const RemoteLanguageModel>(config_.upstream_lm_url, model, options);
  }
  auto ensemble = std::make_shared<const EnsembleModel>(std::move(lm), config_.ensemble);
  std::unique_lock lock(models_mutex_);
  global_markov_ = std::move(model);
  snapshot_.ensemble = std::move(ensemble);
  snapshot_.global_version = version;
}

void Service::install_char(std::shared_ptr<const charlm::CharModel> model, store::Version version) {
  std::unique_lock lock(models_mutex_);
  snapshot_.chars = std::move(model);
  snapshot_.char_version = version;
}

void Service::install_user(UserProfile profile, store::Version version) {
  const std::string id = profile.user_id;
  auto ptr = std::make_shared<const UserProfile>(std::move(profile));
  std::unique_lock lock(models_mutex_);
  users_[id] = std::move(ptr);
  user_versions_[id] = version;
}

void Service::set_corpus(std::vector<corpus::RawNote> notes) {
  std::lock_guard lock(corpus_mutex_);
  corpus_ = std::move(notes);
  corpus_available_ = true;
}

bool Service::ready() const {
  std::shared_lock lock(models_mutex_);
  return snapshot_.ensemble != nullptr;
}

Service::Snapshot Service::snapshot() const {
  std::shared_lock lock(models_mutex_);
  return snapshot_;
}

std::shared_ptr<const UserProfile> Service::user(const std::string& user_id) {
  {
    std::shared_lock lock(models_mutex_);
    if (auto it = users_.find(user_id); it != users_.end()) return it->second;
  }
  const store::ModelKey key = store::ModelKey::user(user_id);
  UserProfile profile;
  profile.user_id = user_id;
  profile.window_days = config_.window_days;
  store::Version version = 0;
  if (store_.has_model(key)) {
    profile.local = std::make_shared<const MarkovModel>(store_.load_model(key));
    version = store_.active_version(key).value_or(0);
  }
  auto ptr = std::make_shared<const UserProfile>(std::move(profile));
  std::unique_lock lock(models_mutex_);
  auto [it, inserted] = users_.emplace(user_id, ptr);
  if (inserted) user_versions_[user_id] = version;
  return it->second;
}

std::string Service::next_request_id() {
  static const std::string prefix = instance_prefix();
  char buf[32];
  std::snprintf(buf, sizeof buf, "-%08llx",
                static_cast<unsigned long long>(request_counter_.fetch_add(1) + 1));
  return prefix + buf;
}

void Service::remember_request(const std::string& id) {
  std::lock_guard lock(requests_mutex_);
  if (!recent_requests_.insert(id).second) return;
  recent_order_.push_back(id);
  if (recent_order_.size() > kRememberedRequests) {
    recent_requests_.erase(recent_order_.front());
    recent_order_.pop_front();
  }
}

bool Service::known_request(const std::string& id) const {
  std::lock_guard lock(requests_mutex_);
  return recent_requests_.contains(id);
}

std::mutex& Service::train_mutex(const std::string& user_id) {
  std::lock_guard lock(train_mutexes_guard_);
  auto& slot = train_mutexes_[user_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

Timestamp Service::window_now() const {
  if (config_.window_now == "clock") {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  }
  if (config_.window_now == "latest") {
    std::lock_guard lock(corpus_mutex_);
    return corpus::latest_timestamp(corpus_);
  }
  return parse_rfc3339(config_.window_now);
}

HttpResponse Service::handle_suggest(std::string_view body) {
  const auto started = std::chrono::steady_clock::now();
  const Snapshot snap = snapshot();
  if (!snap.ensemble) return error_response(503, "models not loaded");

  nlohmann::json req = nlohmann::json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_response(400, "body must be a JSON object");
  auto user_it = req.find("user_id");
  auto text_it = req.find("text");
  auto trigger_it = req.find("trigger");
  if (user_it == req.end() || !user_it->is_string() || user_it->get_ref<const std::string&>().empty()) {
    return error_response(400, "user_id must be a non-empty string");
  }
  if (text_it == req.end() || !text_it->is_string()) return error_response(400, "text must be a string");
  if (trigger_it == req.end() || !trigger_it->is_string()) {
    return error_response(400, "trigger must be \"word_boundary\" or \"char\"");
  }
  const std::string& trigger = trigger_it->get_ref<const std::string&>();
  if (trigger != "word_boundary" && trigger != "char") {
    return error_response(400, "trigger must be \"word_boundary\" or \"char\"");
  }
  std::size_t n = config_.ensemble.top_n;
  if (auto it = req.find("n"); it != req.end() && !it->is_null()) {
    if (!it->is_number_unsigned() || it->get<std::uint64_t>() < 1 || it->get<std::uint64_t>() > kMaxCandidates) {
      return error_response(400, "n must be an integer in [1, 50]");
    }
    n = it->get<std::size_t>();
  }
  const std::string& text = text_it->get_ref<const std::string&>();
  if (utf8::length(text) > config_.max_text_chars) {
    return error_response(413, "text exceeds " + std::to_string(config_.max_text_chars) + " characters");
  }

  std::shared_ptr<const UserProfile> profile;
  try {
    profile = user(user_it->get<std::string>());
  } catch (const InvalidParameter& e) {
    return error_response(400, e.what());
  }

  session::EnsemblePredictor predictor(*snap.ensemble, *profile);
  session::TypingState state = session::state_from_text(text, profile->user_id);
  std::optional<session::Completion> display;
  std::vector<Suggestion> candidates;
  if (trigger == "word_boundary") {
    state.current_partial_word.clear();
    session::BoundaryResult r = session::on_word_boundary(state, predictor, n);
    display = std::move(r.display);
    candidates = std::move(r.cache.candidates);
  } else {
    session::CascadeOptions options;
    options.cache = false;
    options.rematch_n = n;
    std::optional<session::CharCompleter> completer;
    if (snap.chars) completer.emplace(*snap.chars);
    display = session::on_char(state, predictor, completer ? &*completer : nullptr, options);
  }

  const std::string request_id = next_request_id();
  remember_request(request_id);

  json res;
  res["request_id"] = request_id;
  res["trigger"] = trigger;
  if (display) {
    res["display"] = display->remainder;
    res["stage"] = session::to_string(display->stage);
    res["source"] = to_string(display->suggestion.source);
  } else {
    res["display"] = nullptr;
    res["stage"] = nullptr;
    res["source"] = nullptr;
  }
  json list = json::array();
  if (trigger == "word_boundary") {
    for (const Suggestion& s : candidates) list.push_back(candidate_json(s, s.text()));
  } else if (display) {
    list.push_back(candidate_json(display->suggestion, display->remainder));
  }
  res["candidates"] = std::move(list);
  res["model_versions"] = {{"global", snap.global_version}, {"char", snap.char_version}};
  res["latency_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return json_response(200, res);
}

HttpResponse Service::handle_feedback(std::string_view body) {
  store::FeedbackEvent event;
  bool has_timestamp = false;
  try {
    nlohmann::json raw = nlohmann::json::parse(body, nullptr, false);
    if (raw.is_discarded() || !raw.is_object()) return error_response(400, "body must be a JSON object");
    has_timestamp = raw.contains("timestamp") && !raw["timestamp"].is_null();
    event = store::feedback_from_json(body);
  } catch (const InvalidParameter& e) {
    return error_response(400, e.what());
  }
  if (!has_timestamp) {
    event.timestamp = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  }
  event.unknown_request = event.request_id.empty() || !known_request(event.request_id);

  try {
    store_.model_path(store::ModelKey::user(event.user_id));
    store_.append_feedback(event);
  } catch (const InvalidParameter& e) {
    return error_response(400, e.what());
  } catch (const IoError& e) {
    return error_response(500, e.what());
  }

  if (event.action == store::FeedbackAction::accepted) {
    std::lock_guard train_lock(train_mutex(event.user_id));
    std::shared_ptr<const UserProfile> current = user(event.user_id);
    UserProfile next = *current;
    const int order = current->local ? current->local->order() : config_.ensemble.markov_order;
    MarkovModel local = current->local ? *current->local : MarkovModel(order);
    local.add_sequence(store::feedback_sequence(event));
    next.local = std::make_shared<const MarkovModel>(std::move(local));
    store::Version version = 0;
    {
      std::shared_lock lock(models_mutex_);
      if (auto it = user_versions_.find(event.user_id); it != user_versions_.end()) version = it->second;
    }
    install_user(std::move(next), version);
  }
  return {204, "", "application/json"};
}

HttpResponse Service::handle_train(std::string_view user_id_view) {
  const std::string user_id(user_id_view);
  const store::ModelKey key = store::ModelKey::user(user_id);
  try {
    store_.model_path(key);
  } catch (const InvalidParameter& e) {
    return error_response(400, e.what());
  }

  std::vector<corpus::RawNote> notes;
  {
    std::lock_guard lock(corpus_mutex_);
    if (!corpus_available_) return error_response(503, "no corpus configured");
    notes = corpus_;
  }

  std::lock_guard train_lock(train_mutex(user_id));
  Timestamp now;
  try {
    now = window_now();
  } catch (const CorpusError& e) {
    return error_response(500, e.what());
  }
  std::vector<corpus::TokenSequence> sequences =
      corpus::build_user_window(notes, user_id, config_.window_days, now);
  const std::size_t note_count = sequences.size();

  std::size_t feedback_count = 0;
  const Timestamp window_start = now - std::chrono::days(config_.window_days);
  try {
    for (const store::FeedbackEvent& e : store_.read_feedback()) {
      if (e.user_id != user_id || e.action != store::FeedbackAction::accepted) continue;
      if (e.timestamp < window_start || e.timestamp > now) continue;
      sequences.push_back(store::feedback_sequence(e));
      ++feedback_count;
    }
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }

  auto model = std::make_shared<const MarkovModel>(
      MarkovModel::train(sequences, config_.ensemble.markov_order));
  store::Version version = 0;
  try {
    version = store_.save_model(key, *model);
  } catch (const IoError& e) {
    return error_response(500, e.what());
  }

  UserProfile profile;
  profile.user_id = user_id;
  profile.local = model;
  profile.window_days = config_.window_days;
  profile.trained_at = now;
  profile.note_count = note_count;
  install_user(profile, version);

  json res;
  res["user_id"] = user_id;
  res["notes"] = note_count;
  res["feedback_events"] = feedback_count;
  res["tokens"] = model->token_count();
  res["contexts"] = model->context_count();
  res["vocabulary"] = model->vocabulary_size();
  res["version"] = version;
  res["window_days"] = config_.window_days;
  res["window_end"] = format_rfc3339(now);
  return json_response(sequences.empty() ? 404 : 200, res);
}

HttpResponse Service::handle_health() const {
  json res;
  std::shared_lock lock(models_mutex_);
  res["status"] = snapshot_.ensemble ? "ok" : "degraded";
  json versions;
  versions["global"] = snapshot_.ensemble ? json(snapshot_.global_version) : json(nullptr);
  versions["char"] = snapshot_.chars ? json(snapshot_.char_version) : json(nullptr);
  std::map<std::string, store::Version> users(user_versions_.begin(), user_versions_.end());
  versions["users"] = users;
  res["model_versions"] = std::move(versions);
  return json_response(200, res);
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}

  Service& service;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  if (r.status != 204) res.set_content(r.body, r.content_type.c_str());
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, f(req));
    } catch (const std::exception& e) {
      reply(res, error_response(500, e.what()));
    }
  };
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  httplib::Server& svr = impl_->server;
  Service& s = impl_->service;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  svr.set_payload_max_length(1 << 20);
  svr.set_tcp_nodelay(true);
  svr.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  svr.Post("/v1/suggest", guarded([&s](const httplib::Request& req) { return s.handle_suggest(req.body); }));
  svr.Post("/v1/feedback", guarded([&s](const httplib::Request& req) { return s.handle_feedback(req.body); }));
  svr.Post(R"(/v1/users/([^/]+)/train)",
           guarded([&s](const httplib::Request& req) { return s.handle_train(req.matches[1].str()); }));
  svr.Get("/v1/health", guarded([&s](const httplib::Request&) { return s.handle_health(); }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace autocompose::service
