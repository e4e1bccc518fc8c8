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

// Building blocks of the synthetic PII generator, reusable for constructing
// task corpora whose entities the detector covers exactly.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anonbench/corpus.hpp"
#include "anonbench/rng.hpp"

namespace anonbench::corpus {

/// Sentence templates with one `{}` slot for an entity of the category.
std::span<const std::string_view> sentence_templates(Category category);

/// Categories the generator can inject (every category except ORG).
std::span<const Category> synth_categories();

/// Draws one entity surface of `category` from the built-in gazetteers.
std::string synth_entity(Category category, Rng& rng);

/// Appends `sentence_template` with `entity` in its slot, recording the span.
void append_sentence(std::string& text, std::vector<EntitySpan>& spans,
                     std::string_view sentence_template, Category category,
                     const std::string& entity);

struct SynthTask {
  Dataset train;
  Dataset test;
};

/// Single-entity records labelled with the entity's category name. Carrier
/// sentences are shared by all categories, so the entity is the only signal.
/// A `tagged_fraction` of training records carries the bracketed category tag
/// (`[EMAIL]`, ...) in place of the entity, as in partially redacted sources.
SynthTask synth_category_task(std::uint64_t seed, std::size_t n_train,
                              std::size_t n_test, double tagged_fraction = 0.4);

/// Records labelled by topic (sports, finance, weather) through topic
/// sentences; one entity sentence of a random category is added independently
/// of the label. Gold spans cover the entity.
SynthTask synth_topic_task(std::uint64_t seed, std::size_t n_train,
                           std::size_t n_test);

/// Short texts by `n_authors` authors. All authors share one word
/// distribution except for a few signature tokens per author.
SynthTask synth_authorship_task(std::uint64_t seed, std::size_t n_authors,
                                std::size_t train_per_author,
                                std::size_t test_per_author);

/// Signature tokens of the first `n_authors` authors, five per author.
std::vector<std::string> authorship_signature_tokens(std::size_t n_authors);

}  // namespace anonbench::corpus
