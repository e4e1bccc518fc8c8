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

#include <array>
#include <map>
#include <string>

#include "anonbench/anonymize.hpp"
#include "anonbench/error.hpp"
#include "anonbench/hash.hpp"
#include "anonbench/rng.hpp"
#include "anonbench/utf8.hpp"

namespace anonbench::anonymize {

namespace {

using namespace std::string_view_literals;

constexpr std::array kStrategies = {
    Strategy::kUniquePlaceholder,   Strategy::kEntityDeletion,
    Strategy::kUniformPlaceholder,  Strategy::kCategoryPlaceholder,
    Strategy::kFakerPlaceholder,
};

constexpr std::array kStrategyIds = {
    "unique_placeholder"sv,   "entity_deletion"sv,  "uniform_placeholder"sv,
    "category_placeholder"sv, "faker_placeholder"sv,
};

// Surrogate lists are disjoint from the detection gazetteers so surrogates
// are never re-flagged as PERSON or LOCATION.
constexpr std::array kSurrogateFirst = {
    "Corvin"sv,  "Delphine"sv, "Elowen"sv,   "Faustino"sv, "Gwendolyn"sv,
    "Hollis"sv,  "Ignatius"sv, "Juniper"sv,  "Kestrel"sv,  "Leocadia"sv,
    "Marlowe"sv, "Nerissa"sv,  "Orrin"sv,    "Perpetua"sv, "Rowan"sv,
    "Saffron"sv, "Tiberius"sv, "Ulyana"sv,   "Vesper"sv,   "Wendeline"sv,
};
constexpr std::array kSurrogateLast = {
    "Ashdown"sv,  "Brackenridge"sv, "Coldwater"sv, "Dunmore"sv, "Evershed"sv,
    "Fenwick"sv,  "Greystone"sv,    "Holloway"sv,  "Ironside"sv, "Kettleby"sv,
};
constexpr std::array kSurrogatePlaces = {
    "Eastbrook"sv, "Millhaven"sv, "Northfield"sv,  "Oakridge"sv, "Pinecrest"sv,
    "Riverton"sv,  "Stonebridge"sv, "Westmere"sv, "Larkspur"sv, "Thornbury"sv,
};
constexpr std::array kSurrogateOrgs = {
    "Acme Holdings"sv, "Globex Partners"sv, "Initech Labs"sv,
    "Umbra Systems"sv, "Vandelay Industries"sv,
};

template <typename Container>
std::string pick(Rng& rng, const Container& items) {
  return std::string(items[uniform_index(rng, items.size())]);
}

std::string digits(Rng& rng, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    out.push_back(static_cast<char>('0' + uniform_index(rng, 10)));
  }
  return out;
}

std::string two_digit(std::size_t v) {
  return (v < 10 ? "0" : "") + std::to_string(v);
}

// `at` is where a span was removed; `left_free` is false when the previous
// span ends exactly at `at` and its characters must stay put.
void collapse_after_deletion(std::u32string& text, std::size_t at,
                             bool left_free) {
  if (at > 0 && at < text.size() && text[at - 1] == U' ' && text[at] == U' ') {
    text.erase(at, 1);
  } else if (at == 0 && !text.empty() && text[0] == U' ') {
    text.erase(0, 1);
  } else if (left_free && at == text.size() && at > 0 &&
             text[at - 1] == U' ') {
    text.erase(at - 1, 1);
  }
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  return kStrategyIds[static_cast<std::size_t>(strategy)];
}

Strategy parse_strategy(std::string_view id) {
  for (std::size_t i = 0; i < kStrategyIds.size(); ++i) {
    if (kStrategyIds[i] == id) return kStrategies[i];
  }
  throw ArgumentError("unknown strategy id '" + std::string(id) + "'");
}

std::span<const Strategy> all_strategies() { return kStrategies; }

std::string faker_surrogate(Category category, std::uint64_t seed,
                            std::string_view document_id,
                            std::string_view surface) {
  Rng rng(mix_seed(mix_seed(seed, fnv1a64(document_id)), fnv1a64(surface)));
  switch (category) {
    case Category::kPerson: {
      std::string name = pick(rng, kSurrogateFirst);
      if (surface.find(' ') != std::string_view::npos) {
        name += ' ' + pick(rng, kSurrogateLast);
      }
      return name;
    }
    case Category::kLocation: return pick(rng, kSurrogatePlaces);
    case Category::kOrg: return pick(rng, kSurrogateOrgs);
    case Category::kEmail:
      return utf8::ascii_lower(pick(rng, kSurrogateFirst)) + "." +
             utf8::ascii_lower(pick(rng, kSurrogateLast)) + "@example.org";
    case Category::kPhone:
      return "(555) 01" + digits(rng, 1) + "-" + digits(rng, 4);
    case Category::kDate:
      return std::to_string(1900 + uniform_index(rng, 50)) + "-" +
             two_digit(1 + uniform_index(rng, 12)) + "-" +
             two_digit(1 + uniform_index(rng, 28));
    case Category::kId: return "ZZ-" + digits(rng, 6);
    case Category::kUrl: return "https://example.org/item/" + digits(rng, 5);
  }
  return std::string(kRedactedToken);
}

std::string apply_strategy(std::string_view text,
                           std::span<const EntitySpan> spans, Strategy strategy,
                           std::uint64_t seed,
                           std::optional<std::string_view> document_id) {
  corpus::validate_spans(text, spans, "<apply_strategy input>");
  if (spans.empty()) return std::string(text);

  std::vector<std::string> replacements(spans.size());
  switch (strategy) {
    case Strategy::kEntityDeletion:
      break;
    case Strategy::kUniformPlaceholder:
      for (auto& r : replacements) r = std::string(kRedactedToken);
      break;
    case Strategy::kCategoryPlaceholder:
      for (std::size_t i = 0; i < spans.size(); ++i) {
        replacements[i] = "[" + std::string(to_string(spans[i].category)) + "]";
      }
      break;
    case Strategy::kUniquePlaceholder: {
      // Index distinct surfaces per category in order of first appearance.
      std::map<std::pair<Category, std::string>, std::size_t> index;
      std::map<Category, std::size_t> next;
      for (std::size_t i = 0; i < spans.size(); ++i) {
        const auto key = std::make_pair(spans[i].category, spans[i].surface);
        auto it = index.find(key);
        if (it == index.end()) {
          it = index.emplace(key, ++next[spans[i].category]).first;
        }
        replacements[i] = "[" + std::string(to_string(spans[i].category)) + "_" +
                          std::to_string(it->second) + "]";
      }
      break;
    }
    case Strategy::kFakerPlaceholder: {
      const std::string doc =
          document_id ? std::string(*document_id) : sha256_hex(text);
      for (std::size_t i = 0; i < spans.size(); ++i) {
        replacements[i] =
            faker_surrogate(spans[i].category, seed, doc, spans[i].surface);
      }
      break;
    }
  }

  std::u32string out = utf8::decode(text);
  for (std::size_t k = spans.size(); k-- > 0;) {
    const EntitySpan& s = spans[k];
    out.replace(s.start, s.end - s.start, utf8::decode(replacements[k]));
    if (strategy == Strategy::kEntityDeletion) {
      collapse_after_deletion(out, s.start, k == 0 || spans[k - 1].end < s.start);
    }
  }
  return utf8::encode(out);
}

std::string apply_strategy(std::string_view text,
                           std::span<const EntitySpan> spans,
                           std::string_view strategy, std::uint64_t seed) {
  return apply_strategy(text, spans, parse_strategy(strategy), seed);
}

}  // namespace anonbench::anonymize
