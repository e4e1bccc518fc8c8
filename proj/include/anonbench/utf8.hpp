// Copyright 2026 The anonbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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

// UTF-8 helpers. Every offset exposed by the library counts code points.
namespace anonbench::utf8 {

/// Decodes UTF-8. Invalid sequences decode to U+FFFD one byte at a time.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view code_points);
std::string encode(char32_t code_point);

/// Number of code points in `bytes`.
std::size_t length(std::string_view bytes);

/// byte_offsets[i] is the byte offset of code point i; the final entry
/// equals bytes.size().
std::vector<std::size_t> code_point_byte_offsets(std::string_view bytes);

bool is_space(char32_t c);
bool is_punct(char32_t c);
/// ASCII letters/digits or any non-ASCII code point that is neither
/// whitespace nor punctuation.
bool is_word_char(char32_t c);

/// Lowercases ASCII letters; other code points are returned unchanged.
char32_t ascii_lower(char32_t c);
std::string ascii_lower(std::string_view bytes);

}  // namespace anonbench::utf8
