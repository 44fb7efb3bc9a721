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
#include <string_view>
#include <vector>

namespace autocompose::utf8 {

/// Number of code points in `s`. Invalid bytes count as one code point each.
std::size_t length(std::string_view s);

/// Splits `s` into one string per code point.
std::vector<std::string> code_points(std::string_view s);

/// Byte offset of the `n`-th code point (or s.size() when n >= length).
std::size_t byte_offset(std::string_view s, std::size_t n);

/// True for ASCII whitespace and the common Unicode space characters.
bool is_space(std::string_view code_point);

}  // namespace autocompose::utf8
