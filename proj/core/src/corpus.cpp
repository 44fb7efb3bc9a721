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

#include "autocompose/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <string>
#include <unordered_map>

#include <boost/regex.hpp>
#include <json.hpp>

#include "autocompose/errors.hpp"
#include "autocompose/utf8.hpp"

namespace autocompose::corpus {
namespace {

using Replacer = std::string (*)(const boost::smatch&);

std::string replace_all(const std::string& text, const boost::regex& re, Replacer replace) {
  std::string out;
  out.reserve(text.size());
  auto last = text.cbegin();
  for (boost::sregex_iterator it(text.begin(), text.end(), re), end; it != end; ++it) {
    const boost::smatch& m = *it;
    out.append(last, m[0].first);
    out += replace(m);
    last = m[0].second;
  }
  out.append(last, text.cend());
  return out;
}

const boost::regex& html_re() {
  static const boost::regex re(
      R"(<!--.*?-->|<(?!(?:date|url|user|num)>)/?[A-Za-z][A-Za-z0-9-]*(?:\s[^<>]*)?/?>)");
  return re;
}

const boost::regex& url_re() {
  static const boost::regex re(R"((?<![\w@])(?:(?:https?|ftp)://|www\.)[^\s<>"']+)",
                               boost::regex::perl | boost::regex::icase);
  return re;
}

const boost::regex& user_re() {
  static const boost::regex re(
      R"((?<![\w.+-])[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}(?![\w-]))"
      R"(|(?<![\w@<])@[A-Za-z0-9_]{2,}\b)");
  return re;
}

const boost::regex& number_re() {
  static const boost::regex re(R"((?<!\d)(?:\d{12,}|\d{4}(?:[ -]\d{4}){2,3})(?!\d))");
  return re;
}

#define AC_MONTH                                                                      \
  "(?i:jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|aug(?:ust)?|" \
  "sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|dec(?:ember)?)\\.?"
#define AC_ORDINAL "(?i:st|nd|rd|th)?"

const boost::regex& date_re() {
  static const boost::regex re(
      "\\b" AC_MONTH "\\s+\\d{1,2}" AC_ORDINAL "(?:,?\\s+\\d{4})?\\b"
      "|\\b\\d{1,2}" AC_ORDINAL "\\s+(?:of\\s+)?" AC_MONTH "(?:,?\\s+\\d{4})?(?![A-Za-z])"
      "|\\b" AC_MONTH ",?\\s+\\d{4}\\b"
      "|\\b\\d{4}-\\d{1,2}-\\d{1,2}(?:[T ]\\d{1,2}:\\d{2}(?::\\d{2})?)?\\b"
      "|\\b\\d{4}/\\d{1,2}/\\d{1,2}\\b"
      "|\\b\\d{1,2}[/-]\\d{1,2}[/-]\\d{2,4}\\b"
      "|\\b\\d{1,2}\\.\\d{1,2}\\.\\d{4}\\b"
      "|\\b(?:January|February|March|April|June|July|August|September|October|November|"
      "December)\\b"
      "|(?<![\\w$#.,:/-])(?:19|20)\\d{2}(?![\\w%]|[.,:/-]\\d)");
  return re;
}

#undef AC_MONTH
#undef AC_ORDINAL

const boost::regex& contraction_re() {
  static const boost::regex re(R"((?<![A-Za-z'’])([A-Za-z]*)(?:'|’)([A-Za-z]+)(?![A-Za-z'’]))");
  return re;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::unordered_map<std::string, std::string_view>& contraction_index() {
  static const auto index = [] {
    std::unordered_map<std::string, std::string_view> m;
    for (const auto& [k, v] : decontraction_table()) m.emplace(k, v);
    return m;
  }();
  return index;
}

std::string expand_contraction(const boost::smatch& m) {
  std::string original = m[0].str();
  std::string key = lower(m[1].str()) + "'" + lower(m[2].str());
  auto it = contraction_index().find(key);
  if (it == contraction_index().end()) return original;

  std::string expansion(it->second);
  std::string letters = m[1].str() + m[2].str();
  bool all_upper = letters.size() > 1 &&
                   std::all_of(letters.begin(), letters.end(),
                               [](unsigned char c) { return std::isupper(c); });
  if (all_upper) {
    for (char& c : expansion) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (!letters.empty() && std::isupper(static_cast<unsigned char>(letters[0]))) {
    expansion[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(expansion[0])));
  }
  return expansion;
}

std::string strip_tag(const boost::smatch&) { return " "; }
std::string mask_user(const boost::smatch&) { return std::string(kUserMask); }
std::string mask_number(const boost::smatch&) { return std::string(kNumberMask); }
std::string mask_date(const boost::smatch&) { return std::string(kDateMask); }

std::string mask_url(const boost::smatch& m) {
  // Sentence punctuation right after a URL is kept outside the mask.
  std::string url = m[0].str();
  std::size_t end = url.size();
  while (end > 0 && std::string_view(".,;:!?)]}").find(url[end - 1]) != std::string_view::npos) {
    --end;
  }
  return std::string(kUrlMask) + url.substr(end);
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (const std::string& cp : utf8::code_points(text)) {
    if (utf8::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out += cp;
  }
  return out;
}

}  // namespace

const std::vector<std::pair<std::string_view, std::string_view>>& decontraction_table() {
  static const std::vector<std::pair<std::string_view, std::string_view>> table = {
      {"ain't", "is not"},       {"aren't", "are not"},     {"can't", "can not"},
      {"couldn't", "could not"}, {"didn't", "did not"},     {"doesn't", "does not"},
      {"don't", "do not"},       {"hadn't", "had not"},     {"hasn't", "has not"},
      {"haven't", "have not"},   {"isn't", "is not"},       {"mightn't", "might not"},
      {"mustn't", "must not"},   {"needn't", "need not"},   {"shan't", "shall not"},
      {"shouldn't", "should not"}, {"wasn't", "was not"},   {"weren't", "were not"},
      {"won't", "will not"},     {"wouldn't", "would not"}, {"he'd", "he would"},
      {"he'll", "he will"},      {"he's", "he is"},         {"i'd", "i would"},
      {"i'll", "i will"},        {"i'm", "i am"},           {"i've", "i have"},
      {"it'd", "it would"},      {"it'll", "it will"},      {"it's", "it is"},
      {"let's", "let us"},       {"she'd", "she would"},    {"she'll", "she will"},
      {"she's", "she is"},       {"that'd", "that would"},  {"that's", "that is"},
      {"there'd", "there would"}, {"there's", "there is"},  {"they'd", "they would"},
      {"they'll", "they will"},  {"they're", "they are"},   {"they've", "they have"},
      {"we'd", "we would"},      {"we'll", "we will"},      {"we're", "we are"},
      {"we've", "we have"},      {"what's", "what is"},     {"what're", "what are"},
      {"where's", "where is"},   {"who'd", "who would"},    {"who'll", "who will"},
      {"who's", "who is"},       {"who've", "who have"},    {"you'd", "you would"},
      {"you'll", "you will"},    {"you're", "you are"},     {"you've", "you have"},
      {"here's", "here is"},     {"how's", "how is"},       {"y'all", "you all"},
      {"ma'am", "madam"},        {"'tis", "it is"},         {"'twas", "it was"},
  };
  return table;
}

std::string normalize_text(std::string_view raw) {
  std::string text(raw);
  text = replace_all(text, html_re(), strip_tag);
  text = replace_all(text, url_re(), mask_url);
  text = replace_all(text, user_re(), mask_user);
  text = replace_all(text, number_re(), mask_number);
  text = replace_all(text, date_re(), mask_date);
  text = replace_all(text, contraction_re(), expand_contraction);
  return collapse_whitespace(text);
}

TokenSequence tokenize_words(std::string_view normalized) {
  TokenSequence tokens;
  tokens.emplace_back(kStartToken);
  std::string current;
  for (const std::string& cp : utf8::code_points(normalized)) {
    if (utf8::is_space(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current += cp;
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  tokens.emplace_back(kEndToken);
  return tokens;
}

TokenSequence prepare(std::string_view raw) { return tokenize_words(normalize_text(raw)); }

std::vector<TokenSequence> build_user_window(const std::vector<RawNote>& notes,
                                             std::string_view user_id, int window_days,
                                             Timestamp now) {
  if (window_days <= 0) throw InvalidParameter("window_days must be positive");
  const Timestamp start = now - std::chrono::days{window_days};

  std::vector<const RawNote*> selected;
  for (const RawNote& note : notes) {
    if (note.user_id == user_id && note.created_at >= start && note.created_at <= now) {
      selected.push_back(&note);
    }
  }
  std::stable_sort(selected.begin(), selected.end(), [](const RawNote* a, const RawNote* b) {
    return a->created_at < b->created_at;
  });

  std::vector<TokenSequence> out;
  out.reserve(selected.size());
  for (const RawNote* note : selected) out.push_back(prepare(note->text));
  return out;
}

RawNote parse_note(std::string_view json_line) {
  nlohmann::json j = nlohmann::json::parse(json_line);
  if (!j.is_object()) throw CorpusError("record is not a JSON object");
  for (const char* field : {"user_id", "created_at", "text"}) {
    if (!j.contains(field) || !j[field].is_string()) {
      throw CorpusError(std::string("missing or non-string field '") + field + "'");
    }
  }
  RawNote note;
  note.user_id = j["user_id"].get<std::string>();
  if (note.user_id.empty()) throw CorpusError("empty user_id");
  note.created_at = parse_rfc3339(j["created_at"].get<std::string>());
  note.text = j["text"].get<std::string>();
  return note;
}

LoadResult load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    RawNote note;
    try {
      note = parse_note(line);
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const CorpusError& e) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (collapse_whitespace(note.text).empty()) {
      ++result.skipped_empty;
      continue;
    }
    result.notes.push_back(std::move(note));
  }
  if (in.bad()) throw IoError("error reading corpus file " + path.string());
  return result;
}

std::vector<std::string> user_ids(const std::vector<RawNote>& notes) {
  std::set<std::string> ids;
  for (const RawNote& n : notes) ids.insert(n.user_id);
  return {ids.begin(), ids.end()};
}

Timestamp latest_timestamp(const std::vector<RawNote>& notes) {
  Timestamp latest{};
  for (const RawNote& n : notes) latest = std::max(latest, n.created_at);
  return latest;
}

}  // namespace autocompose::corpus
