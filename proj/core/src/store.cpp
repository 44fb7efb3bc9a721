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

#include "autocompose/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "autocompose/corpus.hpp"
#include "autocompose/errors.hpp"

namespace autocompose::store {
namespace fs = std::filesystem;

namespace {

std::string errno_text() { return std::strerror(errno); }

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("write failed for " + path.string() + ": " + errno_text());
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_directory(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_user_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") throw InvalidParameter("invalid user id '" + id + "'");
  for (unsigned char c : id) {
    if (!(std::isalnum(c) || c == '.' || c == '_' || c == '-' || c == '@')) {
      throw InvalidParameter("user id '" + id + "' may only use letters, digits and . _ - @");
    }
  }
}

std::atomic<unsigned> temp_counter{0};

}  // namespace

std::string ModelKey::name() const {
  switch (kind) {
    case ModelKind::global: return "global";
    case ModelKind::character: return "char";
    case ModelKind::user: return "users/" + user_id;
  }
  return "global";
}

std::string_view to_string(FeedbackAction action) {
  switch (action) {
    case FeedbackAction::accepted: return "accepted";
    case FeedbackAction::rejected: return "rejected";
    case FeedbackAction::ignored: return "ignored";
  }
  return "ignored";
}

std::optional<FeedbackAction> feedback_action_from_string(std::string_view s) {
  if (s == "accepted") return FeedbackAction::accepted;
  if (s == "rejected") return FeedbackAction::rejected;
  if (s == "ignored") return FeedbackAction::ignored;
  return std::nullopt;
}

void validate(const FeedbackEvent& event) {
  if (event.user_id.empty()) throw InvalidParameter("feedback needs a user_id");
  if (event.context_hash.empty()) throw InvalidParameter("feedback needs a context_hash");
  if (event.suggestion.empty()) throw InvalidParameter("feedback needs the suggestion text");
  if (event.source != "global" && event.source != "local" && event.source != "ensemble" &&
      event.source != "char") {
    throw InvalidParameter("unknown feedback source '" + event.source + "'");
  }
}

std::string to_json_line(const FeedbackEvent& e) {
  nlohmann::ordered_json j;
  j["user_id"] = e.user_id;
  j["timestamp"] = format_rfc3339(e.timestamp);
  j["context_hash"] = e.context_hash;
  j["suggestion"] = e.suggestion;
  j["action"] = to_string(e.action);
  j["source"] = e.source;
  if (!e.request_id.empty()) j["request_id"] = e.request_id;
  if (!e.session_id.empty()) j["session_id"] = e.session_id;
  if (!e.context.empty()) j["context"] = e.context;
  if (e.unknown_request) j["unknown_request"] = true;
  return j.dump() + "\n";
}

FeedbackEvent feedback_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InvalidParameter("feedback is not a JSON object");

  auto get_string = [&](const char* key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) throw InvalidParameter(std::string("feedback is missing '") + key + "'");
      return {};
    }
    if (!it->is_string()) throw InvalidParameter(std::string("feedback field '") + key + "' must be a string");
    return it->get<std::string>();
  };

  FeedbackEvent e;
  e.user_id = get_string("user_id", true);
  e.suggestion = get_string("suggestion", true);
  const std::string action = get_string("action", true);
  const auto parsed = feedback_action_from_string(action);
  if (!parsed) throw InvalidParameter("unknown feedback action '" + action + "'");
  e.action = *parsed;
  if (std::string source = get_string("source", false); !source.empty()) e.source = source;
  e.request_id = get_string("request_id", false);
  e.session_id = get_string("session_id", false);
  e.context = get_string("context", false);
  e.context_hash = get_string("context_hash", false);
  if (e.context_hash.empty()) e.context_hash = context_hash(e.context);
  const std::string ts = get_string("timestamp", false);
  if (!ts.empty()) {
    try {
      e.timestamp = parse_rfc3339(ts);
    } catch (const CorpusError& err) {
      throw InvalidParameter(std::string("bad feedback timestamp: ") + err.what());
    }
  }
  if (auto it = j.find("unknown_request"); it != j.end() && it->is_boolean()) {
    e.unknown_request = it->get<bool>();
  }
  validate(e);
  return e;
}

std::string context_hash(std::string_view context) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : context) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> feedback_sequence(const FeedbackEvent& event) {
  corpus::TokenSequence seq = corpus::prepare(event.context + event.suggestion);
  seq.pop_back();
  return seq;
}

ModelStore::ModelStore(fs::path root) : root_(std::move(root)) {}

fs::path ModelStore::model_path(const ModelKey& key) const {
  if (key.kind == ModelKind::user) check_user_id(key.user_id);
  return root_ / "models" / (key.name() + ".json");
}

fs::path ModelStore::feedback_path() const { return root_ / "feedback" / "events.ndjson"; }
fs::path ModelStore::index_path() const { return root_ / "models" / "index.json"; }

fs::path ModelStore::version_dir(const ModelKey& key) const {
  if (key.kind == ModelKind::user) check_user_id(key.user_id);
  return root_ / "models" / "versions" / key.name();
}

fs::path ModelStore::version_path(const ModelKey& key, Version v) const {
  return version_dir(key) / (std::to_string(v) + ".json");
}

void ModelStore::atomic_write(const fs::path& path, std::string_view contents) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());

  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(temp_counter++);
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot create " + tmp.string() + ": " + errno_text());
  bool closed = false;
  try {
    write_all(fd, contents, tmp);
    if (::fsync(fd) != 0) throw IoError("fsync failed for " + tmp.string() + ": " + errno_text());
    ::close(fd);
    closed = true;
    if (fault_hook_) fault_hook_("before-rename", path);
  } catch (...) {
    if (!closed) ::close(fd);
    fs::remove(tmp, ec);
    throw;
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string reason = errno_text();
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + reason);
  }
  sync_directory(path.parent_path());
}

std::map<std::string, Version> ModelStore::read_index() const {
  std::map<std::string, Version> index;
  const fs::path path = index_path();
  if (!fs::exists(path)) return index;
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw IntegrityError("corrupted model index " + path.string());
  for (auto& [name, v] : j.items()) {
    if (!v.is_number_unsigned()) throw IntegrityError("corrupted model index " + path.string());
    index[name] = v.get<Version>();
  }
  return index;
}

void ModelStore::write_index(const std::map<std::string, Version>& index) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, v] : index) j[name] = v;
  atomic_write(index_path(), j.dump(2) + "\n");
}

Version ModelStore::save_model(const ModelKey& key, const MarkovModel& model) {
  const std::string bytes = serialize(model);
  std::lock_guard lock(model_mutex_);
  std::map<std::string, Version> index = read_index();
  Version v = 1;
  if (auto it = index.find(key.name()); it != index.end()) v = it->second + 1;
  for (Version existing : versions(key)) v = std::max(v, existing + 1);

  atomic_write(version_path(key, v), bytes);
  atomic_write(model_path(key), bytes);
  index[key.name()] = v;
  write_index(index);
  return v;
}

MarkovModel ModelStore::load_model(const ModelKey& key) const {
  const fs::path path = model_path(key);
  std::string bytes;
  {
    std::lock_guard lock(model_mutex_);
    if (!fs::exists(path)) throw IoError("model not found: " + path.string());
    bytes = read_file(path);
  }
  try {
    return deserialize(bytes);
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

MarkovModel ModelStore::load_version(const ModelKey& key, Version version) const {
  const fs::path path = version_path(key, version);
  if (!fs::exists(path)) throw IoError("model version not found: " + path.string());
  try {
    return deserialize(read_file(path));
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

bool ModelStore::has_model(const ModelKey& key) const { return fs::exists(model_path(key)); }

std::optional<Version> ModelStore::active_version(const ModelKey& key) const {
  std::lock_guard lock(model_mutex_);
  std::map<std::string, Version> index = read_index();
  auto it = index.find(key.name());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<Version> ModelStore::versions(const ModelKey& key) const {
  std::vector<Version> out;
  const fs::path dir = version_dir(key);
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    const std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), ::isdigit)) continue;
    out.push_back(std::stoull(stem));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ModelStore::prune(const ModelKey& key, std::size_t keep) {
  if (keep < 1) throw InvalidParameter("prune must keep at least one version");
  std::lock_guard lock(model_mutex_);
  std::vector<Version> all = versions(key);
  if (all.size() <= keep) return;
  for (std::size_t i = 0; i + keep < all.size(); ++i) {
    std::error_code ec;
    fs::remove(version_path(key, all[i]), ec);
    if (ec) throw IoError("cannot remove " + version_path(key, all[i]).string() + ": " + ec.message());
  }
}

void ModelStore::append_feedback(const FeedbackEvent& event) {
  validate(event);
  std::lock_guard lock(feedback_mutex_);
  if (!feedback_loaded_) {
    for (const FeedbackEvent& e : read_feedback()) {
      auto& last = last_feedback_[{e.user_id, e.session_id}];
      last = std::max(last, e.timestamp);
    }
    feedback_loaded_ = true;
  }
  const std::pair<std::string, std::string> key{event.user_id, event.session_id};
  if (auto it = last_feedback_.find(key); it != last_feedback_.end() && event.timestamp < it->second) {
    throw InvalidParameter("feedback timestamp goes backwards for user '" + event.user_id +
                           "' session '" + event.session_id + "'");
  }

  const fs::path path = feedback_path();
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot open " + path.string() + ": " + errno_text());
  try {
    write_all(fd, to_json_line(event), path);
    if (::fsync(fd) != 0) throw IoError("fsync failed for " + path.string() + ": " + errno_text());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  last_feedback_[key] = event.timestamp;
}

std::vector<FeedbackEvent> ModelStore::read_feedback() const {
  std::vector<FeedbackEvent> out;
  const fs::path path = feedback_path();
  if (!fs::exists(path)) return out;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(feedback_from_json(line));
    } catch (const InvalidParameter& e) {
      throw IntegrityError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace autocompose::store
