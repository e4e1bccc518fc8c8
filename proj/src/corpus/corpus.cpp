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

#include "anonbench/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "anonbench/error.hpp"
#include "anonbench/hash.hpp"
#include "anonbench/utf8.hpp"
#include "json.hpp"

namespace anonbench::corpus {

namespace {

using json = nlohmann::json;

constexpr std::array kCategories = {
    Category::kPerson, Category::kLocation, Category::kOrg, Category::kEmail,
    Category::kPhone,  Category::kDate,     Category::kId,  Category::kUrl,
};

constexpr std::array<std::string_view, 8> kCategoryNames = {
    "PERSON", "LOCATION", "ORG", "EMAIL", "PHONE", "DATE", "ID", "URL",
};

constexpr std::array<std::string_view, 6> kRecordFields = {
    "id", "text", "text2", "label", "author", "spans",
};

// Labels and author ids may be stored as strings or as numbers/bools.
std::optional<std::string> scalar_as_text(const json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number()) return value.dump();
  throw ValidationError("expected a scalar, got " + value.dump());
}

void validate_record(const Record& r) {
  if (r.id.empty()) throw ValidationError("record with empty id");
  if (r.text2 && r.text2->empty()) {
    throw ValidationError("record " + r.id + ": text2 present but empty");
  }
  if (r.gold_spans) validate_spans(r.text, *r.gold_spans, r.id);
}

}  // namespace

std::string_view to_string(Category category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

Category parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return kCategories[i];
  }
  throw ValidationError("unknown entity category '" + std::string(name) + "'");
}

std::span<const Category> all_categories() { return kCategories; }

std::string_view to_string(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  throw ArgumentError("unknown split '" + std::string(name) + "'");
}

EntitySpan make_span(std::string_view text, std::size_t start, std::size_t end,
                     Category category) {
  const auto offsets = utf8::code_point_byte_offsets(text);
  const std::size_t length = offsets.size() - 1;
  if (start >= end || end > length) {
    throw ValidationError("span [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") out of bounds for text of " +
                          std::to_string(length) + " code points");
  }
  return EntitySpan{start, end, category,
                    std::string(text.substr(offsets[start],
                                            offsets[end] - offsets[start]))};
}

void validate_spans(std::string_view text, std::span<const EntitySpan> spans,
                    std::string_view owner) {
  const auto offsets = utf8::code_point_byte_offsets(text);
  const std::size_t length = offsets.size() - 1;
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const EntitySpan& s = spans[i];
    const std::string where = "record " + std::string(owner) + ", span " +
                              std::to_string(i);
    if (s.start >= s.end || s.end > length) {
      throw ValidationError(where + ": [" + std::to_string(s.start) + ", " +
                            std::to_string(s.end) + ") out of bounds (length " +
                            std::to_string(length) + ")");
    }
    if (i > 0 && s.start < previous_end) {
      throw ValidationError(where + ": overlapping or unsorted");
    }
    const std::string_view covered =
        text.substr(offsets[s.start], offsets[s.end] - offsets[s.start]);
    if (covered != s.surface) {
      throw ValidationError(where + ": surface '" + s.surface +
                            "' does not match text '" + std::string(covered) +
                            "'");
    }
    previous_end = s.end;
  }
}

Dataset::Dataset(std::string name, Split split, std::vector<Record> records)
    : name_(std::move(name)), split_(split), records_(std::move(records)) {
  std::set<std::string_view> ids;
  std::set<std::string> labels;
  for (const Record& r : records_) {
    validate_record(r);
    if (!ids.insert(r.id).second) {
      throw ValidationError("duplicate record id " + r.id);
    }
    if (r.label) labels.insert(*r.label);
  }
  label_space_.assign(labels.begin(), labels.end());
  fingerprint_ = dataset_fingerprint(name_, split_, records_);
}

bool Dataset::labeled() const {
  return !records_.empty() &&
         std::all_of(records_.begin(), records_.end(),
                     [](const Record& r) { return r.label.has_value(); });
}

bool Dataset::authored() const {
  return !records_.empty() &&
         std::all_of(records_.begin(), records_.end(),
                     [](const Record& r) { return r.author.has_value(); });
}

bool Dataset::has_gold_spans() const {
  return !records_.empty() &&
         std::all_of(records_.begin(), records_.end(),
                     [](const Record& r) { return r.gold_spans.has_value(); });
}

bool Dataset::sentence_pair() const {
  return !records_.empty() && records_.front().text2.has_value();
}

std::string dataset_fingerprint(const Dataset& d) {
  return dataset_fingerprint(d.name(), d.split(), d.records());
}

std::string dataset_fingerprint(std::string_view name, Split split,
                                std::span<const Record> records) {
  ContentHasher h;
  h.add("anonbench.dataset.v1").add(name).add(to_string(split));
  h.add(static_cast<std::int64_t>(records.size()));
  auto add_optional = [&h](const std::optional<std::string>& v) {
    if (v) {
      h.add_tag('+').add(*v);
    } else {
      h.add_tag('-');
    }
  };
  for (const Record& r : records) {
    h.add(r.id).add(r.text);
    add_optional(r.text2);
    add_optional(r.label);
    add_optional(r.author);
    if (r.gold_spans) {
      h.add_tag('+').add(static_cast<std::int64_t>(r.gold_spans->size()));
      for (const EntitySpan& s : *r.gold_spans) {
        h.add(static_cast<std::int64_t>(s.start))
            .add(static_cast<std::int64_t>(s.end))
            .add(to_string(s.category));
      }
    } else {
      h.add_tag('-');
    }
  }
  return h.hex();
}

FieldMapping::FieldMapping(std::map<std::string, std::string> columns)
    : columns_(std::move(columns)) {
  for (const auto& [field, column] : columns_) {
    if (std::find(kRecordFields.begin(), kRecordFields.end(), field) ==
        kRecordFields.end()) {
      throw ArgumentError("unknown record field '" + field + "' in schema");
    }
    if (column.empty()) {
      throw ArgumentError("empty column name for field '" + field + "'");
    }
  }
}

FieldMapping FieldMapping::parse(std::string_view pairs) {
  std::map<std::string, std::string> columns;
  std::size_t pos = 0;
  while (pos <= pairs.size()) {
    const std::size_t comma = std::min(pairs.find(',', pos), pairs.size());
    const std::string_view item = pairs.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ArgumentError("schema entry '" + std::string(item) +
                          "' is not field=column");
    }
    columns[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
  }
  return FieldMapping(std::move(columns));
}

const std::string& FieldMapping::column(const std::string& field) const {
  auto it = columns_.find(field);
  return it == columns_.end() ? field : it->second;
}

Dataset load_dataset(const std::filesystem::path& path,
                     const FieldMapping& schema, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open dataset file " + path.string());

  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": malformed record: " + e.what(),
                       line_no);
    }
    if (!obj.is_object()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": record is not an object",
                       line_no);
    }
    auto field = [&](const std::string& name) -> const json* {
      auto it = obj.find(schema.column(name));
      return it == obj.end() ? nullptr : &*it;
    };
    Record r;
    try {
      const json* id = field("id");
      const json* text = field("text");
      if (id == nullptr || text == nullptr || !text->is_string()) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": missing id or text",
                         line_no);
      }
      r.id = scalar_as_text(*id).value_or("");
      r.text = text->get<std::string>();
      if (const json* t2 = field("text2"); t2 && !t2->is_null()) {
        r.text2 = t2->get<std::string>();
      }
      if (const json* label = field("label")) r.label = scalar_as_text(*label);
      if (const json* author = field("author")) {
        r.author = scalar_as_text(*author);
      }
      if (const json* spans = field("spans"); spans && !spans->is_null()) {
        std::vector<EntitySpan> gold;
        for (const json& s : *spans) {
          const auto start = s.at("start").get<long long>();
          const auto end = s.at("end").get<long long>();
          if (start < 0 || end < 0) {
            throw ValidationError("record " + r.id + ": negative span offset");
          }
          const Category category =
              parse_category(s.at("category").get<std::string>());
          try {
            gold.push_back(make_span(r.text, static_cast<std::size_t>(start),
                                     static_cast<std::size_t>(end), category));
          } catch (const ValidationError& e) {
            throw ValidationError("record " + r.id + ": " + e.what());
          }
        }
        r.gold_spans = std::move(gold);
      }
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": bad field: " + e.what(),
                       line_no);
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) {
    throw ValidationError(path.string() + ": no records");
  }
  std::string name = options.name.value_or(path.stem().string());
  return Dataset(std::move(name), options.split, std::move(records));
}

void write_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot write dataset file " + path.string());
  for (const Record& r : d.records()) {
    json obj = {{"id", r.id}, {"text", r.text}};
    if (r.text2) obj["text2"] = *r.text2;
    if (r.label) obj["label"] = *r.label;
    if (r.author) obj["author"] = *r.author;
    if (r.gold_spans) {
      json spans = json::array();
      for (const EntitySpan& s : *r.gold_spans) {
        spans.push_back({{"start", s.start},
                         {"end", s.end},
                         {"category", std::string(to_string(s.category))}});
      }
      obj["spans"] = std::move(spans);
    }
    out << obj.dump() << '\n';
  }
  if (!out) throw ArgumentError("failed writing " + path.string());
}

}  // namespace anonbench::corpus
