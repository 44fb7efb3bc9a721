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

#include "autocompose/utf8.hpp"

namespace autocompose::utf8 {
namespace {

std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::size_t next(std::string_view s, std::size_t i) {
  std::size_t len = sequence_length(static_cast<unsigned char>(s[i]));
  if (i + len > s.size()) return i + 1;
  for (std::size_t j = 1; j < len; ++j) {
    if ((static_cast<unsigned char>(s[i + j]) & 0xC0) != 0x80) return i + 1;
  }
  return i + len;
}

}  // namespace

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); i = next(s, i)) ++n;
  return n;
}

std::vector<std::string> code_points(std::string_view s) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = next(s, i);
    out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t byte_offset(std::string_view s, std::size_t n) {
  std::size_t i = 0;
  for (; i < s.size() && n > 0; --n) i = next(s, i);
  return i;
}

bool is_space(std::string_view cp) {
  if (cp.size() == 1) {
    char c = cp[0];
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }
  // U+00A0, U+2002..U+200B, U+202F, U+3000
  return cp == "\xC2\xA0" || cp == "\xE2\x80\x82" || cp == "\xE2\x80\x83" ||
         cp == "\xE2\x80\x89" || cp == "\xE2\x80\x8A" || cp == "\xE2\x80\x8B" ||
         cp == "\xE2\x80\xAF" || cp == "\xE3\x80\x80";
}

}  // namespace autocompose::utf8
