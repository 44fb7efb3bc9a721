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
#include <string>
#include <unordered_map>
#include <vector>

#include "autocompose/charlm.hpp"
#include "autocompose/ensemble.hpp"
#include "autocompose/metrics.hpp"
#include "autocompose/session.hpp"

namespace autocompose::simulation {

struct SimulationResult {
  std::vector<metrics::EvalEvent> events;
  std::size_t total_chars = 0;
  std::size_t notes = 0;
  std::size_t skipped_notes = 0;
  std::size_t keystrokes = 0;
  /// One NDJSON record per keystroke.
  std::vector<std::string> transcript;
};

/// Types every note one code point at a time through a TypingSession.
/// Whenever something is displayed and the upcoming text starts with it
/// (ending on a word boundary), it is accepted and the caret jumps past it.
/// Empty notes are skipped.
SimulationResult simulate(const EnsembleModel& model,
                          const std::unordered_map<std::string, UserProfile>& users,
                          const charlm::CharModel* char_model,
                          const std::vector<metrics::HeldOutNote>& notes,
                          const session::CascadeOptions& options);

/// Cascade with every per-character stage switched off.
session::CascadeOptions word_only();

}  // namespace autocompose::simulation
