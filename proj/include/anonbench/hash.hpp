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

#include <cstdint>
#include <string>
#include <string_view>

namespace anonbench {

/// Hex-encoded SHA-256 digest.
std::string sha256_hex(std::string_view data);

constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Incremental builder for content hashes. Every field is length-prefixed so
/// concatenation boundaries cannot collide.
class ContentHasher {
 public:
  ContentHasher& add(std::string_view field);
  ContentHasher& add(std::int64_t value);
  ContentHasher& add_tag(char tag);
  std::string hex() const;

 private:
  std::string buffer_;
};

}  // namespace anonbench
