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
#include <string>
#include <string_view>
#include <vector>

#include "autocompose/time.hpp"

namespace autocompose::corpus {

inline constexpr std::string_view kStartToken = "<s>";
inline constexpr std::string_view kEndToken = "</s>";

inline constexpr std::string_view kDateMask = "<date>";
inline constexpr std::string_view kUrlMask = "<url>";
inline constexpr std::string_view kUserMask = "<user>";
inline constexpr std::string_view kNumberMask = "<num>";

struct RawNote {
  std::string user_id;
  Timestamp created_at;
  std::string text;
};

/// Word tokens of one note, bracketed by kStartToken / kEndToken.
using TokenSequence = std::vector<std::string>;

/// Expands contractions, masks dates, URLs, user references and long digit
/// runs, strips HTML tags and collapses whitespace. Idempotent.
std::string normalize_text(std::string_view raw);

/// Whitespace split with the start and end markers added. Casing is kept.
TokenSequence tokenize_words(std::string_view normalized);

/// normalize_text followed by tokenize_words.
TokenSequence prepare(std::string_view raw);

/// The fixed contraction table, lowercase keys. Exposed for tests and docs.
const std::vector<std::pair<std::string_view, std::string_view>>& decontraction_table();

/// Normalized, tokenized notes of `user_id` whose timestamps fall inside
/// [now - window_days, now] (both ends inclusive), oldest first.
/// Throws InvalidParameter when window_days <= 0.
std::vector<TokenSequence> build_user_window(const std::vector<RawNote>& notes,
                                             std::string_view user_id, int window_days,
                                             Timestamp now);

struct LoadResult {
  std::vector<RawNote> notes;
  std::size_t skipped_empty = 0;
};

/// Reads newline-delimited JSON records {"user_id","created_at","text"}.
/// Blank lines are ignored; notes whose text is blank after trimming are
/// skipped and counted. Malformed records throw CorpusError with the line
/// number; an unreadable file throws IoError.
LoadResult load_corpus(const std::filesystem::path& path);

/// Parses a single corpus record.
RawNote parse_note(std::string_view json_line);

/// Sorted, de-duplicated user ids.
std::vector<std::string> user_ids(const std::vector<RawNote>& notes);

/// Latest created_at, or the epoch for an empty corpus.
Timestamp latest_timestamp(const std::vector<RawNote>& notes);

}  // namespace autocompose::corpus
