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

#include <gtest/gtest.h>

#include <set>

#include "anonbench/corpus.hpp"
#include "anonbench/error.hpp"
#include "anonbench/synth.hpp"
#include "anonbench/utf8.hpp"
#include "support/temp_dir.hpp"

namespace anonbench::corpus {
namespace {

using testing::TempDir;
using testing::write_file;

Dataset tiny_dataset(std::string name = "tiny") {
  Record a{"a", "hello", {}, {}, {}, {}};
  Record b{"b", "Zürich rocks", {}, "pos", {}, {}};
  b.gold_spans = std::vector<EntitySpan>{make_span(b.text, 0, 6, Category::kLocation)};
  return Dataset(std::move(name), Split::kTest, {a, b});
}

TEST(CorpusLoad, EmptyFileIsRejected) {
  TempDir dir;
  write_file(dir / "empty.jsonl", "");
  try {
    load_dataset(dir / "empty.jsonl");
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no records"), std::string::npos);
  }
}

TEST(CorpusLoad, LabelSpaceIsSortedAndOrderPreserved) {
  TempDir dir;
  write_file(dir / "three.jsonl",
             "{\"id\":\"r1\",\"text\":\"good film\",\"label\":\"pos\"}\n"
             "{\"id\":\"r2\",\"text\":\"bad film\",\"label\":\"neg\"}\n"
             "{\"id\":\"r3\",\"text\":\"great film\",\"label\":\"pos\"}\n");
  const Dataset d = load_dataset(dir / "three.jsonl");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0].id, "r1");
  EXPECT_EQ(d[1].id, "r2");
  EXPECT_EQ(d[2].id, "r3");
  EXPECT_EQ(d.label_space(), (std::vector<std::string>{"neg", "pos"}));
  EXPECT_EQ(d.name(), "three");
  EXPECT_TRUE(d.labeled());
  EXPECT_EQ(d.fingerprint(), dataset_fingerprint(d));
}

TEST(CorpusLoad, SpanBeyondTextNamesTheRecord) {
  TempDir dir;
  write_file(dir / "bad.jsonl",
             "{\"id\":\"ok\",\"text\":\"fine\"}\n"
             "{\"id\":\"broken-7\",\"text\":\"short\",\"spans\":[{\"start\":0,"
             "\"end\":9,\"category\":\"PERSON\"}]}\n");
  try {
    load_dataset(dir / "bad.jsonl");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("broken-7"), std::string::npos);
  }
}

TEST(CorpusLoad, MalformedLineReportsLineNumber) {
  TempDir dir;
  write_file(dir / "bad.jsonl",
             "{\"id\":\"a\",\"text\":\"x\"}\n\n{\"id\":\"b\",\"text\":\n");
  try {
    load_dataset(dir / "bad.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
  }
}

TEST(CorpusLoad, DuplicateIdIsRejected) {
  TempDir dir;
  write_file(dir / "dup.jsonl",
             "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
  EXPECT_THROW(load_dataset(dir / "dup.jsonl"), ValidationError);
}

TEST(CorpusLoad, EmptyText2IsRejected) {
  TempDir dir;
  write_file(dir / "pair.jsonl", "{\"id\":\"a\",\"text\":\"x\",\"text2\":\"\"}\n");
  EXPECT_THROW(load_dataset(dir / "pair.jsonl"), ValidationError);
}

TEST(CorpusLoad, SchemaMapsColumns) {
  TempDir dir;
  write_file(dir / "nli.jsonl",
             "{\"uid\":1,\"premise\":\"A man sleeps.\",\"hypothesis\":\"A man "
             "rests.\",\"gold\":0}\n");
  const auto schema =
      FieldMapping::parse("id=uid,text=premise,text2=hypothesis,label=gold");
  const Dataset d = load_dataset(dir / "nli.jsonl", schema,
                                 {.name = "nli", .split = Split::kTrain});
  EXPECT_EQ(d[0].id, "1");
  EXPECT_EQ(d[0].text2.value(), "A man rests.");
  EXPECT_EQ(d[0].label.value(), "0");
  EXPECT_TRUE(d.sentence_pair());
  EXPECT_EQ(d.split(), Split::kTrain);
  EXPECT_THROW(FieldMapping::parse("txt=premise"), ArgumentError);
  EXPECT_THROW(FieldMapping::parse("text"), ArgumentError);
}

TEST(CorpusLoad, OffsetsAreCodePoints) {
  TempDir dir;
  write_file(dir / "u.jsonl",
             "{\"id\":\"u\",\"text\":\"Née à Zürich\",\"spans\":[{\"start\":6,"
             "\"end\":12,\"category\":\"LOCATION\"}]}\n");
  const Dataset d = load_dataset(dir / "u.jsonl");
  EXPECT_EQ((*d[0].gold_spans)[0].surface, "Zürich");
}

TEST(CorpusRoundTrip, WriteThenLoadPreservesRecordsAndFingerprint) {
  TempDir dir;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset original = synth_pii_corpus(seed, 40);
    write_dataset(original, dir / "rt.jsonl");
    const Dataset reread = load_dataset(dir / "rt.jsonl", {},
                                        {.name = original.name(), .split = original.split()});
    EXPECT_EQ(reread.records(), original.records());
    EXPECT_EQ(reread.fingerprint(), original.fingerprint());
  }
}

TEST(Fingerprint, MatchesIndependentEncoding) {
  // Frozen from a Python re-implementation of the length-prefixed encoding.
  EXPECT_EQ(tiny_dataset().fingerprint(),
            "54accd8aeec7ad4485392ad59ee512af520f4eaadc49cadb4a56eb8e76985720");
}

TEST(Fingerprint, SensitiveToEditsAndName) {
  const Dataset d = tiny_dataset();
  auto records = d.records();
  records[0].text = "hellp";
  EXPECT_NE(Dataset("tiny", Split::kTest, records).fingerprint(), d.fingerprint());
  EXPECT_NE(tiny_dataset("other").fingerprint(), d.fingerprint());
  EXPECT_NE(Dataset("tiny", Split::kTrain, d.records()).fingerprint(), d.fingerprint());
}

TEST(Synth, DeterministicForEqualSeed) {
  EXPECT_EQ(synth_pii_corpus(7, 1).fingerprint(), synth_pii_corpus(7, 1).fingerprint());
  EXPECT_EQ(synth_pii_corpus(7, 100).records(), synth_pii_corpus(7, 100).records());
}

TEST(Synth, DifferentSeedsDiffer) {
  EXPECT_NE(synth_pii_corpus(7, 100).fingerprint(),
            synth_pii_corpus(8, 100).fingerprint());
}

TEST(Synth, RejectsZeroCount) { EXPECT_THROW(synth_pii_corpus(7, 0), ArgumentError); }

TEST(Synth, EveryRecordHasValidGoldSpans) {
  const Dataset d = synth_pii_corpus(7, 100);
  for (const Record& r : d.records()) {
    ASSERT_TRUE(r.gold_spans.has_value());
    EXPECT_GE(r.gold_spans->size(), 1u);
  }
}

// Property over >= 1000 generated records and several seeds.
TEST(Synth, SpanInvariantsHoldAcrossSeeds) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = synth_pii_corpus(seed, 300);
    for (const Record& r : d.records()) {
      const auto& spans = *r.gold_spans;
      ASSERT_GE(spans.size(), 1u);
      ASSERT_LE(spans.size(), 4u);
      const std::u32string cps = utf8::decode(r.text);
      std::size_t previous_end = 0;
      for (const EntitySpan& s : spans) {
        ASSERT_LT(s.start, s.end);
        ASSERT_LE(s.end, cps.size());
        ASSERT_GE(s.start, previous_end);
        ASSERT_EQ(utf8::encode(cps.substr(s.start, s.end - s.start)), s.surface);
        ASSERT_NE(s.category, Category::kOrg);
        previous_end = s.end;
      }
      ++checked;
    }
  }
  EXPECT_GE(checked, 1000u);
}

// Gazetteer entries must not occur inside template prose or each other's
// categories, otherwise surface-based recall would be ambiguous.
TEST(Gazetteer, EntriesDoNotOccurInTemplates) {
  std::vector<std::string> entries;
  for (auto e : gazetteer::first_names()) entries.emplace_back(e);
  for (auto e : gazetteer::surnames()) entries.emplace_back(e);
  for (auto e : gazetteer::cities()) entries.emplace_back(e);
  EXPECT_EQ(gazetteer::first_names().size(), 50u);
  EXPECT_EQ(gazetteer::surnames().size(), 50u);
  EXPECT_EQ(gazetteer::cities().size(), 30u);
  for (Category c : synth_categories()) {
    for (auto t : sentence_templates(c)) {
      const std::string lowered = utf8::ascii_lower(t);
      for (const auto& e : entries) {
        EXPECT_EQ(lowered.find(utf8::ascii_lower(e)), std::string::npos)
            << e << " inside template: " << t;
      }
      EXPECT_NE(lowered.find("{}"), std::string::npos);
    }
  }
  std::set<std::string> unique(entries.begin(), entries.end());
  EXPECT_EQ(unique.size(), entries.size());
}

}  // namespace
}  // namespace anonbench::corpus
