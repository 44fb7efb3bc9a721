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

#include "autocompose/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "autocompose/errors.hpp"
#include "autocompose/time.hpp"

extern char** environ;

namespace autocompose {
namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw InvalidParameter("config key '" + std::string(key) + "' expects a number, got '" +
                           std::string(text) + "'");
  }
  return value;
}

using Setter = std::function<void(AppConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"corpus", [](AppConfig& c, auto, auto v) { c.corpus = std::string(v); }},
      {"store_root", [](AppConfig& c, auto, auto v) { c.store_root = std::string(v); }},
      {"alpha_ensemble",
       [](AppConfig& c, auto k, auto v) { c.ensemble.alpha_ensemble = parse_number<double>(k, v); }},
      {"alpha_norm",
       [](AppConfig& c, auto k, auto v) { c.ensemble.alpha_norm = parse_number<double>(k, v); }},
      {"threshold",
       [](AppConfig& c, auto k, auto v) { c.ensemble.threshold = parse_number<double>(k, v); }},
      {"top_n",
       [](AppConfig& c, auto k, auto v) { c.ensemble.top_n = parse_number<std::size_t>(k, v); }},
      {"max_words",
       [](AppConfig& c, auto k, auto v) { c.ensemble.max_words = parse_number<std::size_t>(k, v); }},
      {"markov_order",
       [](AppConfig& c, auto k, auto v) { c.ensemble.markov_order = parse_number<int>(k, v); }},
      {"char_order", [](AppConfig& c, auto k, auto v) { c.char_order = parse_number<int>(k, v); }},
      {"char_backoff",
       [](AppConfig& c, auto k, auto v) { c.char_options.backoff_factor = parse_number<double>(k, v); }},
      {"max_completion_chars",
       [](AppConfig& c, auto k, auto v) {
         c.char_options.max_completion_chars = parse_number<std::size_t>(k, v);
       }},
      {"upstream_lm_url", [](AppConfig& c, auto, auto v) { c.upstream_lm_url = std::string(v); }},
      {"upstream_timeout_ms",
       [](AppConfig& c, auto k, auto v) { c.upstream_timeout_ms = parse_number<int>(k, v); }},
      {"host", [](AppConfig& c, auto, auto v) { c.host = std::string(v); }},
      {"port", [](AppConfig& c, auto k, auto v) { c.port = parse_number<int>(k, v); }},
      {"max_text_chars",
       [](AppConfig& c, auto k, auto v) { c.max_text_chars = parse_number<std::size_t>(k, v); }},
      {"window_days", [](AppConfig& c, auto k, auto v) { c.window_days = parse_number<int>(k, v); }},
      {"window_now", [](AppConfig& c, auto, auto v) { c.window_now = std::string(v); }},
      {"threads", [](AppConfig& c, auto k, auto v) { c.threads = parse_number<unsigned>(k, v); }},
  };
  return table;
}

std::string env_name(std::string_view key) {
  std::string name = "AUTOCOMPOSE_";
  for (char ch : key) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  return name;
}

}  // namespace

void AppConfig::validate() const {
  ensemble.validate();
  if (char_order < 1) throw InvalidParameter("char_order must be >= 1");
  if (!(char_options.backoff_factor > 0.0 && char_options.backoff_factor <= 1.0)) {
    throw InvalidParameter("char_backoff must lie in (0, 1]");
  }
  if (char_options.max_completion_chars < 1) {
    throw InvalidParameter("max_completion_chars must be >= 1");
  }
  if (upstream_timeout_ms < 1) throw InvalidParameter("upstream_timeout_ms must be >= 1");
  if (port < 0 || port > 65535) throw InvalidParameter("port must lie in [0, 65535]");
  if (max_text_chars < 1) throw InvalidParameter("max_text_chars must be >= 1");
  if (window_days < 1) throw InvalidParameter("window_days must be >= 1");
  if (window_now != "clock" && window_now != "latest") {
    try {
      parse_rfc3339(window_now);
    } catch (const CorpusError&) {
      throw InvalidParameter("window_now must be \"clock\", \"latest\" or an RFC 3339 time");
    }
  }
}

void apply_value(AppConfig& config, std::string_view key, std::string_view value) {
  const auto& table = setters();
  auto it = table.find(key);
  if (it == table.end()) throw InvalidParameter("unknown config key '" + std::string(key) + "'");
  it->second(config, key, value);
}

void apply_json(AppConfig& config, std::string_view json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InvalidParameter("config is not a JSON object");
  for (auto& [key, value] : j.items()) {
    if (value.is_null()) continue;
    if (value.is_object() || value.is_array()) {
      throw InvalidParameter("config key '" + key + "' expects a scalar");
    }
    apply_value(config, key, value.is_string() ? value.get<std::string>() : value.dump());
  }
}

void apply_env(AppConfig& config, const std::map<std::string, std::string>& env) {
  for (const auto& [key, setter] : setters()) {
    auto it = env.find(env_name(key));
    if (it != env.end()) setter(config, key, it->second);
  }
}

std::map<std::string, std::string> process_env() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view entry = *e;
    if (!entry.starts_with("AUTOCOMPOSE_")) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    out.emplace(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return out;
}

AppConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::map<std::string, std::string>& env) {
  AppConfig config;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw IoError("cannot read config file " + file->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      apply_json(config, ss.str());
    } catch (const InvalidParameter& e) {
      throw InvalidParameter(file->string() + ": " + e.what());
    }
  }
  apply_env(config, env);
  return config;
}

}  // namespace autocompose
