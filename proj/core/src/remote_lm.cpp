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

#include "autocompose/remote_lm.hpp"

#include <httplib.h>

#include <json.hpp>

#include "autocompose/errors.hpp"

namespace autocompose {

RemoteLanguageModel::RemoteLanguageModel(std::string base_url,
                                         std::shared_ptr<const LanguageModel> fallback,
                                         RemoteLmOptions options)
    : fallback_(std::move(fallback)), options_(options) {
  if (!fallback_) throw InvalidParameter("remote model needs a fallback model");
  constexpr std::string_view scheme = "http://";
  std::string_view rest = base_url;
  if (!rest.starts_with(scheme)) {
    throw InvalidParameter("upstream URL must start with http://: " + base_url);
  }
  rest.remove_prefix(scheme.size());
  const std::size_t slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  path_prefix_ = slash == std::string_view::npos ? "" : std::string(rest.substr(slash));
  while (path_prefix_.ends_with('/')) path_prefix_.pop_back();

  port_ = 80;
  if (const std::size_t colon = authority.rfind(':'); colon != std::string_view::npos) {
    try {
      port_ = std::stoi(std::string(authority.substr(colon + 1)));
    } catch (const std::exception&) {
      throw InvalidParameter("bad port in upstream URL: " + base_url);
    }
    authority = authority.substr(0, colon);
  }
  host_ = authority;
  if (host_.empty()) throw InvalidParameter("upstream URL has no host: " + base_url);
}

bool RemoteLanguageModel::circuit_open() const {
  std::lock_guard lock(mutex_);
  return std::chrono::steady_clock::now() < open_until_;
}

void RemoteLanguageModel::record_failure() const {
  std::lock_guard lock(mutex_);
  if (++consecutive_failures_ >= options_.failure_threshold) {
    open_until_ = std::chrono::steady_clock::now() + options_.cooldown;
    consecutive_failures_ = 0;
  }
}

std::optional<Distribution> RemoteLanguageModel::query(std::span<const std::string> context) const {
  httplib::Client client(host_, port_);
  const auto sec = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - sec);
  client.set_connection_timeout(sec.count(), usec.count());
  client.set_read_timeout(sec.count(), usec.count());
  client.set_write_timeout(sec.count(), usec.count());

  nlohmann::json body;
  body["context"] = std::vector<std::string>(context.begin(), context.end());
  ++remote_calls_;
  auto res = client.Post(path_prefix_ + "/next", body.dump(), "application/json");
  if (!res || res->status != 200) return std::nullopt;

  nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto dist = j.find("distribution");
  if (dist == j.end() || !dist->is_object()) return std::nullopt;
  std::vector<Distribution::Entry> entries;
  for (auto& [symbol, p] : dist->items()) {
    if (!p.is_number()) return std::nullopt;
    const double prob = p.get<double>();
    if (!(prob >= 0.0 && prob <= 1.0)) return std::nullopt;
    entries.push_back({symbol, prob});
  }
  return Distribution(std::move(entries));
}

Distribution RemoteLanguageModel::next_distribution(std::span<const std::string> context) const {
  if (!circuit_open()) {
    if (std::optional<Distribution> d = query(context)) {
      std::lock_guard lock(mutex_);
      consecutive_failures_ = 0;
      return std::move(*d);
    }
    record_failure();
  }
  ++fallbacks_;
  return fallback_->next_distribution(context);
}

}  // namespace autocompose
