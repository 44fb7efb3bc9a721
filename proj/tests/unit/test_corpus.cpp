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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>

#include "autocompose/corpus.hpp"
#include "autocompose/errors.hpp"

using namespace autocompose;
using namespace autocompose::corpus;
namespace fs = std::filesystem;

namespace {

std::size_t word_count(const std::string& s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    const bool space = c == ' ';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

// Random note text mixing plain words with everything the masker handles.
std::string random_note(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "thank", "you", "for", "the", "update", "Please", "review", "ticket", "ok.", "done,",
      "ain't", "can't", "Won't", "I'm", "it's", "they're", "o'clock", "rock'n'roll", "'tis",
      "01/05/2023", "2023-01-05", "5-1-2023", "12.03.2024", "March 3rd, 2021", "3 March 2021",
      "Jan 5", "in 2019", "September", "http://x.co", "https://example.com/a?b=c.", "www.test.org",
      "bob@example.com", "@alice", "123456789012", "4111 1111 1111 1111", "<b>bold</b>",
      "<br/>", "<p class=\"x\">", "<!-- note -->", "  ", "\t", "\n", "&", "$2019", "42%",
      "May", "may", "<date>", "<url>", "<user>", "<num>", "caf\xc3\xa9", "na\xc3\xafve",
      "\xe2\x80\x99tis", "we\xe2\x80\x99re", "2024/02/29", "a.m.", "10:30"};
  std::string out;
  const int n = static_cast<int>(rng() % 20);
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out += (rng() % 5 == 0) ? "  " : " ";
    out += pieces[rng() % pieces.size()];
  }
  return out;
}

const std::vector<std::regex>& leak_patterns() {
  static const std::vector<std::regex> patterns = {
      std::regex(R"(\d{4}-\d{1,2}-\d{1,2})"),
      std::regex(R"(\d{1,2}/\d{1,2}/\d{2,4})"),
      std::regex(R"(\d{1,2}-\d{1,2}-\d{4})"),
      std::regex(R"(\d{4}/\d{1,2}/\d{1,2})"),
      std::regex(R"(\b(January|February|March|April|June|July|August|September|October|November|December)\b)"),
      std::regex(R"(\b(Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Oct|Nov|Dec)\.? \d{1,2}\b)", std::regex::icase),
      std::regex(R"(https?://)"),
      std::regex(R"(\bwww\.)"),
      std::regex(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+\.[A-Za-z]{2,})"),
      std::regex(R"(\d{12,})"),
      std::regex(R"(</?[a-z]+[^<>]*>)"),
  };
  return patterns;
}

bool leaks(const std::string& normalized) {
  // Mask tokens themselves look like tags; blank them out first.
  const std::string masked = std::regex_replace(normalized, std::regex("<(date|url|user|num)>"), "#");
  for (const std::regex& re : leak_patterns()) {
    if (std::regex_search(masked, re)) return true;
  }
  for (const auto& [contraction, expansion] : decontraction_table()) {
    const std::regex re("(^|[^A-Za-z'])" + std::string(contraction) + "($|[^A-Za-z'])", std::regex::icase);
    if (std::regex_search(masked, re)) return true;
  }
  return false;
}

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path dir = fs::temp_directory_path() / "autocompose_test_corpus";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << contents;
  return p;
}

}  // namespace

TEST_CASE("normalize_text examples") {
  CHECK(normalize_text("ain't done") == "is not done");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("call me 01/05/2023 at http://x.co") == "call me <date> at <url>");
}

TEST_CASE("contractions keep capitalization") {
  CHECK(normalize_text("Can't stop") == "Can not stop");
  CHECK(normalize_text("WON'T") == "WILL NOT");
  CHECK(normalize_text("I'm here") == "I am here");
  CHECK(normalize_text("we\xe2\x80\x99re close") == "we are close");
  CHECK(normalize_text("'Tis true") == "It is true");
  CHECK(normalize_text("rock'n'roll o'clock") == "rock'n'roll o'clock");
}

TEST_CASE("masks") {
  CHECK(normalize_text("due 2023-01-05 or 5-1-2023") == "due <date> or <date>");
  CHECK(normalize_text("on March 3rd, 2021 and 3 March 2021") == "on <date> and <date>");
  CHECK(normalize_text("back in 2019 or in September") == "back in <date> or in <date>");
  CHECK(normalize_text("May I ask") == "May I ask");
  CHECK(normalize_text("mail bob@example.com or ping @alice") == "mail <user> or ping <user>");
  CHECK(normalize_text("card 4111 1111 1111 1111 ref 123456789012") == "card <num> ref <num>");
  CHECK(normalize_text("short 12345678901 stays") == "short 12345678901 stays");
  CHECK(normalize_text("see https://example.com/a?b=c.") == "see <url>.");
  CHECK(normalize_text("<p class=\"x\">Hi<br/>there</p>") == "Hi there");
  CHECK(normalize_text("a <!-- hidden --> b") == "a b");
  CHECK(normalize_text("  spaced \t\n out  ") == "spaced out");
}

TEST_CASE("normalization is idempotent and leaves nothing to mask") {
  std::mt19937 rng(1234);
  for (int i = 0; i < 2000; ++i) {
    const std::string raw = random_note(rng);
    const std::string once = normalize_text(raw);
    CAPTURE(raw);
    CAPTURE(once);
    CHECK(normalize_text(once) == once);
    CHECK_FALSE(leaks(once));
  }
}

TEST_CASE("decontraction table") {
  const auto& table = decontraction_table();
  CHECK(table.size() >= 50);
  for (const auto& [k, v] : table) {
    CAPTURE(k);
    CHECK(normalize_text(k) == v);
  }
}

TEST_CASE("tokenize_words") {
  CHECK(tokenize_words("thank you") == TokenSequence{"<s>", "thank", "you", "</s>"});
  CHECK(tokenize_words("<date> due") == TokenSequence{"<s>", "<date>", "due", "</s>"});
  CHECK(tokenize_words("") == TokenSequence{"<s>", "</s>"});

  std::mt19937 rng(99);
  for (int i = 0; i < 500; ++i) {
    const std::string t = normalize_text(random_note(rng));
    const TokenSequence seq = tokenize_words(t);
    CHECK(seq.size() == word_count(t) + 2);
    CHECK(seq.front() == "<s>");
    CHECK(seq.back() == "</s>");
    for (const std::string& tok : seq) CHECK_FALSE(tok.empty());
  }
}

TEST_CASE("build_user_window") {
  const Timestamp now = parse_rfc3339("2024-04-01T00:00:00Z");
  const std::vector<RawNote> notes = {
      {"u1", now - std::chrono::days(10), "recent one"},
      {"u1", now - std::chrono::days(100), "old"},
      {"u1", now - std::chrono::days(5), "recent two"},
      {"u2", now - std::chrono::days(1), "other user"},
      {"u3", now - std::chrono::days(90), "boundary"},
      {"u3", now + std::chrono::seconds(1), "future"},
  };
  const auto w = build_user_window(notes, "u1", 90, now);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == TokenSequence{"<s>", "recent", "one", "</s>"});
  CHECK(w[1] == TokenSequence{"<s>", "recent", "two", "</s>"});
  CHECK(build_user_window(notes, "nobody", 90, now).empty());
  CHECK(build_user_window({notes[3]}, "u1", 90, now).empty());
  const auto b = build_user_window(notes, "u3", 90, now);
  REQUIRE(b.size() == 1);
  CHECK(b[0][1] == "boundary");
  CHECK_THROWS_AS(build_user_window(notes, "u1", 0, now), InvalidParameter);
}

TEST_CASE("load_corpus") {
  const fs::path good = temp_file("good.ndjson",
                                  "{\"user_id\":\"a\",\"created_at\":\"2024-01-01T10:00:00Z\",\"text\":\"hi there\"}\n"
                                  "\n"
                                  "{\"user_id\":\"b\",\"created_at\":\"2024-01-02T10:00:00+02:00\",\"text\":\"   \"}\n"
                                  "{\"user_id\":\"b\",\"created_at\":\"2024-01-03T10:00:00.5Z\",\"text\":\"bye\"}\n");
  const LoadResult r = load_corpus(good);
  REQUIRE(r.notes.size() == 2);
  CHECK(r.skipped_empty == 1);
  CHECK(r.notes[0].user_id == "a");
  CHECK(format_rfc3339(r.notes[1].created_at) == "2024-01-03T10:00:00Z");
  CHECK(user_ids(r.notes) == std::vector<std::string>{"a", "b"});
  CHECK(latest_timestamp(r.notes) == parse_rfc3339("2024-01-03T10:00:00Z"));

  const fs::path bad = temp_file("bad.ndjson",
                                 "{\"user_id\":\"a\",\"created_at\":\"2024-01-01T10:00:00Z\",\"text\":\"x\"}\n"
                                 "{\"user_id\":\"a\",\"created_at\":\"yesterday\",\"text\":\"x\"}\n");
  try {
    load_corpus(bad);
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_corpus(temp_file("broken.ndjson", "{not json}\n")), CorpusError);
  CHECK_THROWS_AS(load_corpus(temp_file("missing.ndjson", "{\"user_id\":\"a\",\"text\":\"x\"}\n")), CorpusError);
  CHECK_THROWS_AS(load_corpus("/nonexistent/notes.ndjson"), IoError);
}

TEST_CASE("timestamps") {
  CHECK(format_rfc3339(parse_rfc3339("2024-02-29T23:59:59-01:00")) == "2024-03-01T00:59:59Z");
  CHECK_THROWS_AS(parse_rfc3339("2024-02-29T23:59:59"), CorpusError);
  CHECK_THROWS_AS(parse_rfc3339("2023-02-29T00:00:00Z"), CorpusError);
}
