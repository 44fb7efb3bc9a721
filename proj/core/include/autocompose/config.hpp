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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "autocompose/charlm.hpp"
#include "autocompose/ensemble.hpp"

namespace autocompose {

/// Settings shared by the service and the CLI.
///
/// Keys (JSON config file / AUTOCOMPOSE_<KEY> environment variable):
///   corpus, store_root, alpha_ensemble, alpha_norm, threshold, top_n,
///   max_words, markov_order, char_order, char_backoff, max_completion_chars,
///   upstream_lm_url, upstream_timeout_ms, host, port, max_text_chars,
///   window_days, window_now, threads
///
/// Precedence, lowest first: built-in defaults, config file, environment,
/// command-line flags.
struct AppConfig {
  std::filesystem::path corpus;
  std::filesystem::path store_root = "store";
  EnsembleConfig ensemble;
  int char_order = 6;
  charlm::CharModelOptions char_options;
  std::string upstream_lm_url;
  int upstream_timeout_ms = 60;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_text_chars = 10000;
  int window_days = 90;
  /// "clock", "latest" (newest note in the corpus) or an RFC 3339 time.
  std::string window_now = "clock";
  unsigned threads = 0;

  /// Throws InvalidParameter on out-of-range values.
  void validate() const;
};

/// Applies the keys present in a JSON object. Unknown keys throw
/// InvalidParameter.
void apply_json(AppConfig& config, std::string_view json_text);

/// Applies a single key given as text.
void apply_value(AppConfig& config, std::string_view key, std::string_view value);

/// Applies AUTOCOMPOSE_* variables from `env`.
void apply_env(AppConfig& config, const std::map<std::string, std::string>& env);

/// The AUTOCOMPOSE_* subset of the process environment.
std::map<std::string, std::string> process_env();

/// Defaults, then `file` when given, then the environment.
AppConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::map<std::string, std::string>& env);

}  // namespace autocompose
