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

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "anonbench/anonymize.hpp"
#include "anonbench/utf8.hpp"

namespace anonbench::anonymize {

namespace {

// Frozen detector patterns. Changing any of them changes privacy scores;
// bump kDetectorVersion when doing so.
constexpr const char* kEmailPattern =
    R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})";
constexpr const char* kUrlPattern =
    R"((?:https?://|www\.)[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+)"
    R"((?:/[A-Za-z0-9_~%=?&+-]*(?:\.[A-Za-z0-9_~%=?&+-]+)*)*)";
constexpr const char* kPhonePattern =
    R"((?:\+\d{1,3} )?(?:\(\d{3}\) ?|\d{3}[-. ])\d{3}[-.]\d{4})";
constexpr const char* kDatePattern =
    R"(\d{4}-\d{2}-\d{2}|\d{1,2}/\d{1,2}/\d{4}|)"
    R"((?:January|February|March|April|May|June|July|August|September|October|November|December) \d{1,2}, \d{4})";
constexpr const char* kIdPattern = R"([A-Z]{2,3}-\d{4,9}|\d{3}-\d{2}-\d{4})";

struct Candidate {
  std::size_t start;
  std::size_t end;
  Category category;
};

struct RegexCategory {
  std::regex pattern;
  Category category;
};

const std::vector<RegexCategory>& regex_categories() {
  static const std::vector<RegexCategory> kPatterns = [] {
    std::vector<RegexCategory> p;
    p.push_back({std::regex(kEmailPattern), Category::kEmail});
    p.push_back({std::regex(kUrlPattern), Category::kUrl});
    p.push_back({std::regex(kPhonePattern), Category::kPhone});
    p.push_back({std::regex(kDatePattern), Category::kDate});
    p.push_back({std::regex(kIdPattern), Category::kId});
    return p;
  }();
  return kPatterns;
}

struct Gazetteers {
  std::set<std::u32string> person_tokens;
  // First word -> full entries (as word sequences), longest first.
  std::map<std::u32string, std::vector<std::vector<std::u32string>>> cities;
};

std::vector<std::u32string> split_words(std::string_view entry) {
  std::vector<std::u32string> words;
  std::u32string current;
  for (char32_t c : utf8::decode(entry)) {
    if (c == U' ') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

const Gazetteers& gazetteers() {
  static const Gazetteers kGazetteers = [] {
    Gazetteers g;
    for (auto name : corpus::gazetteer::first_names()) {
      g.person_tokens.insert(utf8::decode(name));
    }
    for (auto name : corpus::gazetteer::surnames()) {
      g.person_tokens.insert(utf8::decode(name));
    }
    for (auto city : corpus::gazetteer::cities()) {
      auto words = split_words(city);
      g.cities[words.front()].push_back(std::move(words));
    }
    for (auto& [first, entries] : g.cities) {
      std::sort(entries.begin(), entries.end(),
                [](const auto& a, const auto& b) { return a.size() > b.size(); });
    }
    return g;
  }();
  return kGazetteers;
}

struct Token {
  std::size_t start;
  std::size_t end;
};

std::vector<Token> word_tokens(const std::u32string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!utf8::is_word_char(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && utf8::is_word_char(text[i])) ++i;
    tokens.push_back({start, i});
  }
  return tokens;
}

bool boundary_ok(const std::u32string& text, std::size_t start,
                 std::size_t end) {
  if (start > 0 && utf8::is_word_char(text[start - 1])) return false;
  if (end < text.size() && utf8::is_word_char(text[end])) return false;
  return true;
}

void regex_candidates(std::string_view bytes, const std::u32string& text,
                      std::vector<Candidate>& out) {
  const auto offsets = utf8::code_point_byte_offsets(bytes);
  std::vector<std::size_t> cp_of_byte(bytes.size() + 1, 0);
  for (std::size_t i = 0; i < offsets.size(); ++i) cp_of_byte[offsets[i]] = i;

  const std::string owned(bytes);
  for (const RegexCategory& rc : regex_categories()) {
    for (auto it = std::sregex_iterator(owned.begin(), owned.end(), rc.pattern);
         it != std::sregex_iterator(); ++it) {
      const auto byte_start = static_cast<std::size_t>(it->position(0));
      const auto byte_end = byte_start + static_cast<std::size_t>(it->length(0));
      if (byte_end == byte_start) continue;
      const std::size_t start = cp_of_byte[byte_start];
      const std::size_t end = cp_of_byte[byte_end];
      if (boundary_ok(text, start, end)) out.push_back({start, end, rc.category});
    }
  }
}

void gazetteer_candidates(const std::u32string& text,
                          std::vector<Candidate>& out) {
  const Gazetteers& g = gazetteers();
  const std::vector<Token> tokens = word_tokens(text);
  auto word = [&](std::size_t i) {
    return text.substr(tokens[i].start, tokens[i].end - tokens[i].start);
  };
  auto single_space_between = [&](std::size_t i) {
    return tokens[i + 1].start == tokens[i].end + 1 &&
           text[tokens[i].end] == U' ';
  };

  // Person names: maximal runs of gazetteer tokens separated by one space.
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!g.person_tokens.count(word(i))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < tokens.size() && single_space_between(j) &&
           g.person_tokens.count(word(j + 1))) {
      ++j;
    }
    out.push_back({tokens[i].start, tokens[j].end, Category::kPerson});
    i = j + 1;
  }

  for (std::size_t t = 0; t < tokens.size(); ++t) {
    auto it = g.cities.find(word(t));
    if (it == g.cities.end()) continue;
    for (const auto& entry : it->second) {
      if (t + entry.size() > tokens.size()) continue;
      bool match = true;
      for (std::size_t k = 1; k < entry.size() && match; ++k) {
        match = single_space_between(t + k - 1) && word(t + k) == entry[k];
      }
      if (match) {
        out.push_back({tokens[t].start, tokens[t + entry.size() - 1].end,
                       Category::kLocation});
        break;
      }
    }
  }
}

}  // namespace

DetectionResult detect_entities(std::string_view text) {
  DetectionResult result;
  result.detector_version = std::string(kDetectorVersion);
  if (text.empty()) return result;

  const std::u32string cps = utf8::decode(text);
  std::vector<Candidate> candidates;
  regex_candidates(text, cps, candidates);
  gazetteer_candidates(cps, candidates);

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     const auto la = a.end - a.start;
                     const auto lb = b.end - b.start;
                     if (la != lb) return la > lb;
                     return a.start < b.start;
                   });
  std::vector<Candidate> accepted;
  for (const Candidate& c : candidates) {
    const bool overlaps = std::any_of(
        accepted.begin(), accepted.end(), [&](const Candidate& a) {
          return c.start < a.end && a.start < c.end;
        });
    if (!overlaps) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.start < b.start; });

  for (const Candidate& c : accepted) {
    result.spans.push_back(EntitySpan{
        c.start, c.end, c.category,
        utf8::encode(std::u32string_view(cps).substr(c.start, c.end - c.start))});
  }
  return result;
}

}  // namespace anonbench::anonymize
