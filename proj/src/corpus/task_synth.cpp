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

#include "anonbench/error.hpp"
#include "anonbench/synth.hpp"

namespace anonbench::corpus {

namespace {

using namespace std::string_view_literals;

constexpr std::array kCarriers = {
    "The clerk copied {} into the ledger."sv,
    "Someone wrote {} on the back of the envelope."sv,
    "The second field of the form reads {} without comment."sv,
    "Nobody could explain why {} appeared in the draft."sv,
};

constexpr std::array kFillers = {
    "Nothing else was noted."sv,
    "The file was closed afterwards."sv,
    "A copy went to the archive."sv,
    "The review continues next week."sv,
};

constexpr std::array kSportsSentences = {
    "The striker scored twice in the second half."sv,
    "Fans filled the stadium for the league final."sv,
    "The coach praised the defence after the match."sv,
    "Our team won the relay by half a lap."sv,
    "The goalkeeper saved a penalty in extra time."sv,
};
constexpr std::array kFinanceSentences = {
    "Quarterly revenue rose faster than analysts expected."sv,
    "The bank raised its interest rate forecast."sv,
    "Shares slipped after the earnings call."sv,
    "The fund rebalanced its bond portfolio."sv,
    "Investors worried about the budget deficit."sv,
};
constexpr std::array kWeatherSentences = {
    "Heavy rain is expected along the coast tonight."sv,
    "A cold front will bring snow to the hills."sv,
    "Forecasters warned of strong gusts and hail."sv,
    "The heatwave should break by the weekend."sv,
    "Morning fog will clear into sunny skies."sv,
};

constexpr std::array kSharedWords = {
    "the"sv,    "a"sv,      "of"sv,     "and"sv,    "to"sv,     "in"sv,    "it"sv,
    "was"sv,    "we"sv,     "they"sv,   "that"sv,   "with"sv,   "for"sv,   "on"sv,
    "after"sv,  "before"sv, "morning"sv, "evening"sv, "walked"sv, "talked"sv, "found"sv,
    "kept"sv,   "small"sv,  "large"sv,  "quiet"sv,  "bright"sv, "house"sv, "street"sv,
    "garden"sv, "window"sv, "letter"sv, "river"sv,  "train"sv,  "market"sv, "friend"sv,
    "neighbour"sv, "dinner"sv, "coffee"sv, "book"sv, "story"sv, "again"sv, "later"sv,
    "slowly"sv, "really"sv, "perhaps"sv, "always"sv, "never"sv, "often"sv, "then"sv,
    "there"sv,
};

constexpr std::array kStems = {"zint"sv, "brov"sv, "quel"sv, "marv"sv, "tusk"sv,
                               "flen"sv, "grop"sv, "hald"sv, "jurn"sv, "plox"sv,
                               "wrim"sv, "dask"sv};
constexpr std::array kSuffixes = {"ish"sv, "ova"sv, "umb"sv, "ette"sv, "ard"sv};

template <typename Container>
std::string_view pick(Rng& rng, const Container& items) {
  return items[uniform_index(rng, items.size())];
}

std::string tag_of(Category c) { return "[" + std::string(to_string(c)) + "]"; }

Record category_record(Rng& rng, std::string id, bool tagged) {
  const auto categories = synth_categories();
  const Category category = categories[uniform_index(rng, categories.size())];
  Record r;
  r.id = std::move(id);
  r.label = std::string(to_string(category));
  std::vector<EntitySpan> spans;
  const std::string_view carrier = pick(rng, kCarriers);
  if (tagged) {
    const std::size_t slot = carrier.find("{}");
    r.text = std::string(carrier.substr(0, slot)) + tag_of(category) +
             std::string(carrier.substr(slot + 2));
  } else {
    append_sentence(r.text, spans, carrier, category, synth_entity(category, rng));
  }
  if (uniform_index(rng, 2) == 0) {
    r.text += ' ';
    r.text += pick(rng, kFillers);
  }
  r.gold_spans = std::move(spans);
  return r;
}

Record topic_record(Rng& rng, std::string id) {
  static constexpr std::array kTopics = {"sports"sv, "finance"sv, "weather"sv};
  const std::size_t topic = uniform_index(rng, kTopics.size());
  auto topic_sentence = [&] {
    switch (topic) {
      case 0: return pick(rng, kSportsSentences);
      case 1: return pick(rng, kFinanceSentences);
      default: return pick(rng, kWeatherSentences);
    }
  };
  Record r;
  r.id = std::move(id);
  r.label = std::string(kTopics[topic]);
  std::vector<EntitySpan> spans;
  const auto categories = synth_categories();
  const Category category = categories[uniform_index(rng, categories.size())];
  const std::string_view entity_template = pick(rng, sentence_templates(category));
  const std::string entity = synth_entity(category, rng);
  const bool entity_first = uniform_index(rng, 2) == 0;
  if (entity_first) append_sentence(r.text, spans, entity_template, category, entity);
  for (int k = 0; k < 2; ++k) {
    if (!r.text.empty()) r.text += ' ';
    r.text += topic_sentence();
  }
  if (!entity_first) append_sentence(r.text, spans, entity_template, category, entity);
  r.gold_spans = std::move(spans);
  return r;
}

}  // namespace

SynthTask synth_category_task(std::uint64_t seed, std::size_t n_train, std::size_t n_test,
                              double tagged_fraction) {
  if (n_train == 0 || n_test == 0) throw ArgumentError("synth_category_task: empty split");
  if (tagged_fraction < 0 || tagged_fraction > 1) {
    throw ArgumentError("synth_category_task: tagged_fraction outside [0, 1]");
  }
  Rng rng(mix_seed(seed, 0xca7e));
  std::vector<Record> train;
  std::vector<Record> test;
  for (std::size_t i = 0; i < n_train; ++i) {
    const bool tagged = uniform_unit(rng) < tagged_fraction;
    train.push_back(category_record(rng, "cat-train-" + std::to_string(i), tagged));
  }
  for (std::size_t i = 0; i < n_test; ++i) {
    test.push_back(category_record(rng, "cat-test-" + std::to_string(i), false));
  }
  return {Dataset("synth_category", Split::kTrain, std::move(train)),
          Dataset("synth_category", Split::kTest, std::move(test))};
}

SynthTask synth_topic_task(std::uint64_t seed, std::size_t n_train, std::size_t n_test) {
  if (n_train == 0 || n_test == 0) throw ArgumentError("synth_topic_task: empty split");
  Rng rng(mix_seed(seed, 0x70b1c));
  std::vector<Record> train;
  std::vector<Record> test;
  for (std::size_t i = 0; i < n_train; ++i) {
    train.push_back(topic_record(rng, "topic-train-" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < n_test; ++i) {
    test.push_back(topic_record(rng, "topic-test-" + std::to_string(i)));
  }
  return {Dataset("synth_topic", Split::kTrain, std::move(train)),
          Dataset("synth_topic", Split::kTest, std::move(test))};
}

std::vector<std::string> authorship_signature_tokens(std::size_t n_authors) {
  if (n_authors > kStems.size()) {
    throw ArgumentError("at most " + std::to_string(kStems.size()) + " synthetic authors");
  }
  std::vector<std::string> out;
  for (std::size_t a = 0; a < n_authors; ++a) {
    for (std::string_view suffix : kSuffixes) out.push_back(std::string(kStems[a]) + std::string(suffix));
  }
  return out;
}

SynthTask synth_authorship_task(std::uint64_t seed, std::size_t n_authors,
                                std::size_t train_per_author, std::size_t test_per_author) {
  if (n_authors < 2) throw ArgumentError("synth_authorship_task: need at least 2 authors");
  if (train_per_author == 0 || test_per_author == 0) {
    throw ArgumentError("synth_authorship_task: empty split");
  }
  const std::vector<std::string> signatures = authorship_signature_tokens(n_authors);
  Rng rng(mix_seed(seed, 0xa07));
  auto make = [&](std::size_t author, const std::string& id) {
    constexpr std::size_t kWords = 14;
    constexpr std::size_t kSignatureWords = 3;
    std::vector<std::string> words;
    for (std::size_t k = 0; k < kWords - kSignatureWords; ++k) {
      words.emplace_back(pick(rng, kSharedWords));
    }
    for (std::size_t k = 0; k < kSignatureWords; ++k) {
      const std::string& sig = signatures[author * kSuffixes.size() +
                                          uniform_index(rng, kSuffixes.size())];
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, words.size() + 1)),
                   sig);
    }
    Record r;
    r.id = id;
    r.author = "author_" + std::string(author < 10 ? "0" : "") + std::to_string(author);
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (k) r.text += ' ';
      r.text += words[k];
    }
    r.text += '.';
    return r;
  };
  std::vector<Record> train;
  std::vector<Record> test;
  for (std::size_t i = 0; i < train_per_author; ++i) {
    for (std::size_t a = 0; a < n_authors; ++a) {
      train.push_back(make(a, "auth-train-" + std::to_string(train.size())));
    }
  }
  for (std::size_t i = 0; i < test_per_author; ++i) {
    for (std::size_t a = 0; a < n_authors; ++a) {
      test.push_back(make(a, "auth-test-" + std::to_string(test.size())));
    }
  }
  return {Dataset("synth_authorship", Split::kTrain, std::move(train)),
          Dataset("synth_authorship", Split::kTest, std::move(test))};
}

}  // namespace anonbench::corpus
