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
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autocompose/markov.hpp"
#include "autocompose/time.hpp"

namespace autocompose::store {

enum class ModelKind { global, character, user };

struct ModelKey {
  ModelKind kind = ModelKind::global;
  std::string user_id;

  static ModelKey global() { return {ModelKind::global, {}}; }
  static ModelKey character() { return {ModelKind::character, {}}; }
  static ModelKey user(std::string id) { return {ModelKind::user, std::move(id)}; }

  /// "global", "char" or "users/<id>".
  std::string name() const;

  auto operator<=>(const ModelKey&) const = default;
};

using Version = std::uint64_t;

enum class FeedbackAction { accepted, rejected, ignored };

std::string_view to_string(FeedbackAction action);
std::optional<FeedbackAction> feedback_action_from_string(std::string_view s);

struct FeedbackEvent {
  std::string user_id;
  Timestamp timestamp{};
  std::string context_hash;
  std::string suggestion;
  FeedbackAction action = FeedbackAction::ignored;
  std::string source = "ensemble";
  std::string request_id;
  std::string session_id;
  std::string context;  // text before the caret when shown, optional
  bool unknown_request = false;
};

/// Throws InvalidParameter describing the first problem found.
void validate(const FeedbackEvent& event);

std::string to_json_line(const FeedbackEvent& event);

/// Throws InvalidParameter on malformed input.
FeedbackEvent feedback_from_json(std::string_view json);

/// 64-bit FNV-1a of the context, as 16 hex digits.
std::string context_hash(std::string_view context);

/// Word sequence that an accepted suggestion adds to the user's model: the
/// context with the suggestion appended verbatim, normalized, without the
/// end marker.
std::vector<std::string> feedback_sequence(const FeedbackEvent& event);

/// File-backed model and feedback persistence.
///
///   <root>/models/global.json
///   <root>/models/char.json
///   <root>/models/users/<id>.json
///   <root>/models/versions/<key>/<version>.json
///   <root>/models/index.json
///   <root>/feedback/events.ndjson
///
/// Every file is written to a temporary path and renamed into place, so a
/// reader never sees a partially written model.
class ModelStore {
 public:
  explicit ModelStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Persists a new version and makes it active. Older versions stay on disk
  /// until prune().
  Version save_model(const ModelKey& key, const MarkovModel& model);

  /// Active version. Throws IoError if absent, IntegrityError if corrupted.
  MarkovModel load_model(const ModelKey& key) const;
  MarkovModel load_version(const ModelKey& key, Version version) const;

  bool has_model(const ModelKey& key) const;
  std::optional<Version> active_version(const ModelKey& key) const;
  std::vector<Version> versions(const ModelKey& key) const;

  /// Removes all but the newest `keep` versions.
  void prune(const ModelKey& key, std::size_t keep);

  std::filesystem::path model_path(const ModelKey& key) const;
  std::filesystem::path feedback_path() const;

  /// Validates, then appends one NDJSON line. Timestamps must not go
  /// backwards within a (user, session) pair.
  void append_feedback(const FeedbackEvent& event);
  std::vector<FeedbackEvent> read_feedback() const;

  /// Called with a stage name ("before-rename") and the target path during
  /// every atomic write. Tests use it to simulate crashes.
  using FaultHook = std::function<void(std::string_view stage, const std::filesystem::path&)>;
  void set_fault_hook(FaultHook hook) { fault_hook_ = std::move(hook); }

 private:
  std::filesystem::path version_dir(const ModelKey& key) const;
  std::filesystem::path version_path(const ModelKey& key, Version v) const;
  std::filesystem::path index_path() const;
  std::map<std::string, Version> read_index() const;
  void write_index(const std::map<std::string, Version>& index);
  void atomic_write(const std::filesystem::path& path, std::string_view contents);

  std::filesystem::path root_;
  FaultHook fault_hook_;
  mutable std::mutex model_mutex_;
  std::mutex feedback_mutex_;
  std::map<std::pair<std::string, std::string>, Timestamp> last_feedback_;
  bool feedback_loaded_ = false;
};

}  // namespace autocompose::store
