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

#include "autocompose/simulation.hpp"

#include <json.hpp>

#include "autocompose/utf8.hpp"

namespace autocompose::simulation {
namespace {

// The text ahead of the caret split on spaces; the first piece is the rest
// of the current word and may be empty.
std::vector<std::string> upcoming_pieces(std::string_view upcoming, std::size_t max_pieces) {
  std::vector<std::string> pieces;
  std::size_t start = 0;
  while (pieces.size() < max_pieces) {
    const std::size_t space = upcoming.find(' ', start);
    pieces.emplace_back(upcoming.substr(start, space - start));
    if (space == std::string_view::npos) break;
    start = space + 1;
  }
  return pieces;
}

bool ends_on_boundary(std::string_view upcoming, std::size_t len) {
  return len == upcoming.size() || upcoming[len] == ' ';
}

}  // namespace

session::CascadeOptions word_only() {
  session::CascadeOptions options;
  options.cache = false;
  options.rematch = false;
  options.character = false;
  return options;
}

SimulationResult simulate(const EnsembleModel& model,
                          const std::unordered_map<std::string, UserProfile>& users,
                          const charlm::CharModel* char_model,
                          const std::vector<metrics::HeldOutNote>& notes,
                          const session::CascadeOptions& options) {
  SimulationResult result;
  const UserProfile nobody;
  std::optional<session::CharCompleter> completer;
  if (char_model != nullptr) completer.emplace(*char_model);

  for (std::size_t n = 0; n < notes.size(); ++n) {
    const metrics::HeldOutNote& note = notes[n];
    if (note.text.empty()) {
      ++result.skipped_notes;
      continue;
    }
    ++result.notes;
    auto u = users.find(note.user_id);
    const UserProfile& user = u == users.end() ? nobody : u->second;
    session::EnsemblePredictor predictor(model, user);
    session::TypingSession typing(predictor, completer ? &*completer : nullptr, options,
                                  model.config().top_n);

    const std::vector<std::string> cps = utf8::code_points(note.text);
    result.total_chars += cps.size();
    std::size_t pos = 0;
    std::size_t byte_pos = 0;
    std::optional<session::Completion> shown = typing.begin();
    std::string key;

    auto log = [&](std::string_view action, bool accepted) {
      nlohmann::ordered_json j;
      j["note"] = n;
      j["pos"] = pos;
      j["action"] = action;
      j["key"] = key;
      if (shown) {
        j["stage"] = session::to_string(shown->stage);
        j["source"] = to_string(shown->suggestion.source);
        j["display"] = shown->remainder;
        j["accepted"] = accepted;
      } else {
        j["display"] = nullptr;
      }
      result.transcript.push_back(j.dump());
    };

    while (true) {
      // One event per trigger, displayed or not.
      metrics::EvalEvent e;
      e.note_index = n;
      e.char_offset = pos;
      e.context = session::anchor_tokens(typing.state().anchor_text());
      bool accepted = false;
      if (shown && !shown->remainder.empty()) {
        const std::string_view upcoming = std::string_view(note.text).substr(byte_pos);
        const std::string& r = shown->remainder;
        accepted = upcoming.starts_with(r) && ends_on_boundary(upcoming, r.size());
        e.suggestion = shown->suggestion;
        e.gated = true;
        e.ground_truth = upcoming_pieces(upcoming, shown->suggestion.tokens.size() + 1);
        e.accepted = accepted;
      }
      result.events.push_back(std::move(e));
      log(pos == 0 && key.empty() ? "begin" : "type", accepted);

      if (accepted) {
        typing.accept(*shown);
        byte_pos += shown->remainder.size();
        pos += utf8::length(shown->remainder);
        ++result.keystrokes;
        key = "\t";
        shown.reset();
        log("accept", false);
      }
      if (pos >= cps.size()) break;
      key = cps[pos];
      shown = typing.type(key);
      byte_pos += key.size();
      ++pos;
      ++result.keystrokes;
    }
  }
  return result;
}

}  // namespace autocompose::simulation
