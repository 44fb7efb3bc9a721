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

// Deterministic corpus generator for protocol tests: a shared "global"
// style plus per-user idiolects that disagree with it.

#include <cstdint>
#include <string>
#include <vector>

#include "autocompose/corpus.hpp"
#include "autocompose/metrics.hpp"

namespace synthetic {

struct Options {
  std::size_t users = 12;
  std::size_t global_contexts = 6;  // per user: truth follows the global model
  std::size_t local_contexts = 6;   // per user: truth follows the user's model
  std::size_t tail_words = 3;       // words per branch, 1..3
  std::uint64_t seed = 7;
};

/// Every context is a two-word lead-in "a b" followed by one of two branches
/// "right t1 t2" / "wrong w1 w2" (shortened to tail_words). In global contexts the background users
/// make `right` dominant globally while the user's own history leans to
/// `wrong`; local contexts are the mirror image. Each context contributes one
/// held-out note taking the right branch.
struct Corpus {
  std::vector<autocompose::corpus::RawNote> train;
  std::vector<autocompose::corpus::RawNote> held_out;
  std::vector<std::string> users;
};

Corpus make_blended(const Options& options = {});

/// Pronounceable word for an integer id; distinct ids give distinct words.
std::string word(std::uint64_t id);

/// Global model over all training notes, one local model per user over that
/// user's training notes, held-out notes ready for replay.
autocompose::metrics::EvalCorpus eval_corpus(const Corpus& corpus, int order = 2);

}  // namespace synthetic
