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
#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "autocompose/markov.hpp"

namespace autocompose {

struct RemoteLmOptions {
  std::chrono::milliseconds timeout{60};
  std::size_t failure_threshold = 3;
  std::chrono::milliseconds cooldown{5000};
};

/// Global model served by an upstream inference endpoint.
///
/// POST <base_url>/next with {"context": [tokens...]} must answer
/// {"distribution": {"token": probability, ...}}. Any error, timeout or
/// malformed answer falls back to `fallback`. After failure_threshold
/// consecutive failures the circuit opens and every call goes straight to
/// the fallback until the cooldown has passed.
class RemoteLanguageModel final : public LanguageModel {
 public:
  RemoteLanguageModel(std::string base_url, std::shared_ptr<const LanguageModel> fallback,
                      RemoteLmOptions options = {});

  Distribution next_distribution(std::span<const std::string> context) const override;

  bool circuit_open() const;
  std::size_t remote_calls() const noexcept { return remote_calls_; }
  std::size_t fallbacks() const noexcept { return fallbacks_; }

 private:
  std::optional<Distribution> query(std::span<const std::string> context) const;
  void record_failure() const;

  std::string host_;
  int port_;
  std::string path_prefix_;
  std::shared_ptr<const LanguageModel> fallback_;
  RemoteLmOptions options_;

  mutable std::mutex mutex_;
  mutable std::size_t consecutive_failures_ = 0;
  mutable std::chrono::steady_clock::time_point open_until_{};
  mutable std::atomic<std::size_t> remote_calls_{0};
  mutable std::atomic<std::size_t> fallbacks_{0};
};

}  // namespace autocompose
