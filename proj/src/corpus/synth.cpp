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
#include <string>

#include "anonbench/corpus.hpp"
#include "anonbench/error.hpp"
#include "anonbench/rng.hpp"
#include "anonbench/utf8.hpp"
#include "anonbench/synth.hpp"

namespace anonbench::corpus {

namespace {

using namespace std::string_view_literals;

constexpr std::array kMonths = {
    "January"sv, "February"sv, "March"sv,     "April"sv,   "May"sv,      "June"sv,
    "July"sv,    "August"sv,   "September"sv, "October"sv, "November"sv, "December"sv,
};

constexpr std::array kUrlPaths = {
    "profile"sv, "account"sv, "records"sv, "case"sv, "member"sv,
};

template <typename Container>
std::string_view pick(Rng& rng, const Container& items) {
  return items[uniform_index(rng, items.size())];
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

std::string person(Rng& rng) {
  std::string name(pick(rng, gazetteer::first_names()));
  if (uniform_index(rng, 2) == 0) {
    name += ' ';
    name += pick(rng, gazetteer::surnames());
  }
  return name;
}

std::string email(Rng& rng) {
  std::string local = utf8::ascii_lower(pick(rng, gazetteer::first_names()));
  local += uniform_index(rng, 2) == 0 ? '.' : '_';
  local += utf8::ascii_lower(pick(rng, gazetteer::surnames()));
  if (uniform_index(rng, 2) == 0) local += digits(rng, 2);
  return local + "@" + std::string(pick(rng, gazetteer::email_domains()));
}

std::string phone(Rng& rng) {
  switch (uniform_index(rng, 3)) {
    case 0:
      return "(" + digits(rng, 3) + ") " + digits(rng, 3) + "-" + digits(rng, 4);
    case 1:
      return digits(rng, 3) + "-" + digits(rng, 3) + "-" + digits(rng, 4);
    default:
      return "+44 " + digits(rng, 3) + "-" + digits(rng, 3) + "-" +
             digits(rng, 4);
  }
}

std::string date(Rng& rng) {
  const std::size_t year = 1950 + uniform_index(rng, 75);
  const std::size_t month = 1 + uniform_index(rng, 12);
  const std::size_t day = 1 + uniform_index(rng, 28);
  switch (uniform_index(rng, 3)) {
    case 0:
      return std::to_string(year) + "-" + two_digit(month) + "-" +
             two_digit(day);
    case 1:
      return std::to_string(month) + "/" + std::to_string(day) + "/" +
             std::to_string(year);
    default:
      return std::string(kMonths[month - 1]) + " " + std::to_string(day) +
             ", " + std::to_string(year);
  }
}

std::string identifier(Rng& rng) {
  if (uniform_index(rng, 2) == 0) {
    return digits(rng, 3) + "-" + digits(rng, 2) + "-" + digits(rng, 4);
  }
  std::string prefix;
  for (int i = 0; i < 2; ++i) {
    prefix.push_back(static_cast<char>('A' + uniform_index(rng, 26)));
  }
  return prefix + "-" + digits(rng, 6);
}

std::string url(Rng& rng) {
  return "https://www." + std::string(pick(rng, gazetteer::url_sites())) +
         ".com/" + std::string(pick(rng, kUrlPaths)) + "/" + digits(rng, 5);
}

}  // namespace

std::string synth_entity(Category category, Rng& rng) {
  switch (category) {
    case Category::kPerson: return person(rng);
    case Category::kLocation: return std::string(pick(rng, gazetteer::cities()));
    case Category::kEmail: return email(rng);
    case Category::kPhone: return phone(rng);
    case Category::kDate: return date(rng);
    case Category::kId: return identifier(rng);
    case Category::kUrl: return url(rng);
    case Category::kOrg: break;
  }
  throw ArgumentError("no synthetic generator for category ORG");
}

std::span<const Category> synth_categories() {
  static constexpr std::array kInjectable = {
      Category::kPerson, Category::kLocation, Category::kEmail, Category::kPhone,
      Category::kDate,   Category::kId,       Category::kUrl,
  };
  return kInjectable;
}

void append_sentence(std::string& text, std::vector<EntitySpan>& spans,
                     std::string_view sentence_template, Category category,
                     const std::string& entity) {
  if (!text.empty()) text += ' ';
  const std::size_t slot = sentence_template.find("{}");
  text += sentence_template.substr(0, slot);
  const std::size_t start = utf8::length(text);
  text += entity;
  const std::size_t end = utf8::length(text);
  text += sentence_template.substr(slot + 2);
  spans.push_back(EntitySpan{start, end, category, entity});
}

Dataset synth_pii_corpus(std::uint64_t seed, std::size_t n) {
  if (n < 1) throw ArgumentError("synth_pii_corpus: n must be >= 1");
  Rng rng(mix_seed(seed, 0x5e1f));
  const auto categories = synth_categories();
  std::vector<Record> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Record r;
    r.id = "pii-" + std::to_string(i);
    std::vector<EntitySpan> spans;
    const std::size_t count = 1 + uniform_index(rng, 4);
    for (std::size_t k = 0; k < count; ++k) {
      const Category category = categories[uniform_index(rng, categories.size())];
      const auto templates = sentence_templates(category);
      const std::string_view sentence = templates[uniform_index(rng, templates.size())];
      append_sentence(r.text, spans, sentence, category, synth_entity(category, rng));
    }
    r.gold_spans = std::move(spans);
    records.push_back(std::move(r));
  }
  return Dataset("synth_pii", Split::kTest, std::move(records));
}

}  // namespace anonbench::corpus
