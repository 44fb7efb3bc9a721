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

#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "autocompose/charlm.hpp"
#include "autocompose/corpus.hpp"
#include "autocompose/ensemble.hpp"
#include "autocompose/markov.hpp"

namespace bench {

// Models trained once on the bundled corpus and shared by every benchmark.
struct Desk {
  std::vector<std::string> texts;
  std::vector<autocompose::corpus::TokenSequence> sequences;
  std::shared_ptr<const autocompose::MarkovModel> global;
  std::shared_ptr<const autocompose::charlm::CharModel> chars;
  autocompose::UserProfile user;
};

inline const Desk& desk() {
  static const Desk d = [] {
    using namespace autocompose;
    Desk d;
    const auto loaded = corpus::load_corpus(std::filesystem::path(AUTOCOMPOSE_CORPUS_DIR) / "shakespeare_notes.ndjson");
    for (const auto& note : loaded.notes) {
      d.texts.push_back(corpus::normalize_text(note.text));
      d.sequences.push_back(corpus::tokenize_words(d.texts.back()));
    }
    d.global = std::make_shared<const MarkovModel>(MarkovModel::train(d.sequences, 2));
    d.chars = std::make_shared<const charlm::CharModel>(charlm::train_char(d.texts, 6));
    const std::string id = loaded.notes.front().user_id;
    d.user.user_id = id;
    d.user.local = std::make_shared<const MarkovModel>(
        MarkovModel::train(corpus::build_user_window(loaded.notes, id, 90, corpus::latest_timestamp(loaded.notes)), 2));
    return d;
  }();
  return d;
}

}  // namespace bench
