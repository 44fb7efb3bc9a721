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

// Independent reference implementations used to check the library. They are
// deliberately naive: plain maps, string operations, no shared code with the
// code under test.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Context = std::vector<std::string>;
using Tally = std::map<Context, std::map<std::string, std::uint64_t>>;

/// Sliding-window counts for every context length 1..k. Sequences starting
/// with `pad` get k-1 extra copies of it in front; the copies are context
/// only and never counted as a next symbol.
inline Tally count_ngrams(const std::vector<std::vector<std::string>>& sequences, int k,
                          const std::optional<std::string>& pad = std::string("<s>")) {
  Tally tally;
  for (std::vector<std::string> seq : sequences) {
    std::size_t first = 1;
    if (pad && !seq.empty() && seq.front() == *pad) {
      seq.insert(seq.begin(), k - 1, *pad);
      first = static_cast<std::size_t>(k);
    }
    for (std::size_t i = first; i < seq.size(); ++i) {
      for (int len = 1; len <= k && static_cast<std::size_t>(len) <= i; ++len) {
        Context ctx(seq.begin() + static_cast<long>(i) - len, seq.begin() + static_cast<long>(i));
        tally[ctx][seq[i]] += 1;
      }
    }
  }
  return tally;
}

inline std::map<std::string, double> mle(const Tally& tally, const Context& ctx) {
  std::map<std::string, double> out;
  auto it = tally.find(ctx);
  if (it == tally.end()) return out;
  std::uint64_t total = 0;
  for (const auto& [s, c] : it->second) total += c;
  for (const auto& [s, c] : it->second) out[s] = static_cast<double>(c) / static_cast<double>(total);
  return out;
}

struct Candidate {
  std::string text;
  double score = 0.0;
};

struct Match {
  std::size_t index = 0;
  std::string remainder;
};

/// Best-scored candidate whose text starts with `typed`, which must lie
/// inside its first word; the rest of the text is the remainder and must not
/// be empty. Ties go to the smaller text.
inline std::optional<Match> prefix_match(const std::vector<Candidate>& candidates, const std::string& typed) {
  std::optional<Match> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::string& text = candidates[i].text;
    const std::size_t first_word_len = text.find(' ') == std::string::npos ? text.size() : text.find(' ');
    if (typed.empty() || typed.size() > first_word_len) continue;
    if (text.compare(0, typed.size(), typed) != 0) continue;
    if (text.size() == typed.size()) continue;
    if (best) {
      const Candidate& b = candidates[best->index];
      if (candidates[i].score < b.score) continue;
      if (candidates[i].score == b.score && !(text < b.text)) continue;
    }
    best = Match{i, text.substr(typed.size())};
  }
  return best;
}

}  // namespace oracle
