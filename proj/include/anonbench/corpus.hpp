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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anonbench::corpus {

/// Closed vocabulary of sensitive-span categories.
enum class Category { kPerson, kLocation, kOrg, kEmail, kPhone, kDate, kId, kUrl };

std::string_view to_string(Category category);
/// Parses the upper-case name ("PERSON", "EMAIL", ...). Throws ValidationError.
Category parse_category(std::string_view name);
std::span<const Category> all_categories();

/// A sensitive span. Offsets are code-point offsets into the owning text,
/// `end` exclusive.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  Category category = Category::kPerson;
  std::string surface;

  bool operator==(const EntitySpan&) const = default;
};

/// Builds a span over `text`, filling in the surface. Throws ValidationError
/// when the offsets are out of bounds.
EntitySpan make_span(std::string_view text, std::size_t start, std::size_t end,
                     Category category);

/// Checks bounds, ordering, non-overlap and surface agreement. `owner` names
/// the record in error messages.
void validate_spans(std::string_view text, std::span<const EntitySpan> spans,
                    std::string_view owner);

enum class Split { kTrain, kTest };
std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct Record {
  std::string id;
  std::string text;
  std::optional<std::string> text2;
  std::optional<std::string> label;
  std::optional<std::vector<EntitySpan>> gold_spans;
  std::optional<std::string> author;

  bool operator==(const Record&) const = default;
};

/// Immutable, validated collection of records. Construction validates every
/// record and computes the label space and the content fingerprint.
class Dataset {
 public:
  Dataset(std::string name, Split split, std::vector<Record> records);

  const std::string& name() const { return name_; }
  Split split() const { return split_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }

  /// Distinct labels, sorted lexicographically.
  const std::vector<std::string>& label_space() const { return label_space_; }
  const std::string& fingerprint() const { return fingerprint_; }

  /// True when every record carries a label.
  bool labeled() const;
  /// True when every record carries an author id.
  bool authored() const;
  /// True when every record carries a gold span list (possibly empty).
  bool has_gold_spans() const;
  bool sentence_pair() const;

 private:
  std::string name_;
  Split split_;
  std::vector<Record> records_;
  std::vector<std::string> label_space_;
  std::string fingerprint_;
};

/// Stable content hash over (name, split, ordered record contents).
std::string dataset_fingerprint(const Dataset& d);
std::string dataset_fingerprint(std::string_view name, Split split,
                                std::span<const Record> records);

/// Maps Record fields (id, text, text2, label, author, spans) to the column
/// names used in a dataset file. Unmapped fields use their own name.
class FieldMapping {
 public:
  FieldMapping() = default;
  explicit FieldMapping(std::map<std::string, std::string> columns);

  /// Parses `field=column` pairs separated by commas.
  static FieldMapping parse(std::string_view pairs);

  const std::string& column(const std::string& field) const;
  const std::map<std::string, std::string>& columns() const { return columns_; }

 private:
  std::map<std::string, std::string> columns_;
};

struct LoadOptions {
  /// Dataset name; defaults to the file stem.
  std::optional<std::string> name;
  Split split = Split::kTest;
};

/// Reads a line-delimited JSON dataset. Blank lines are skipped.
Dataset load_dataset(const std::filesystem::path& path,
                     const FieldMapping& schema = {},
                     const LoadOptions& options = {});

/// Writes records in the canonical line format (default column names).
void write_dataset(const Dataset& d, const std::filesystem::path& path);

/// Deterministic synthetic PII corpus: templated sentences with 1-4
/// injected gazetteer entities each, exact gold spans.
Dataset synth_pii_corpus(std::uint64_t seed, std::size_t n);

/// Built-in word lists shared by the generator and the entity detector.
namespace gazetteer {
std::span<const std::string_view> first_names();
std::span<const std::string_view> surnames();
std::span<const std::string_view> cities();
std::span<const std::string_view> email_domains();
std::span<const std::string_view> url_sites();
}  // namespace gazetteer

}  // namespace anonbench::corpus
