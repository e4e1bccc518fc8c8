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
#include <cmath>

#include "anonbench/error.hpp"
#include "anonbench/experiment.hpp"
#include "anonbench/fsutil.hpp"

namespace anonbench::experiment {

namespace {

using json = nlohmann::json;

// Strict reader that reports the path of whatever is wrong.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  Reader field(const std::string& key) const {
    expect(json::value_t::object, "an object");
    auto it = j_.find(key);
    if (it == j_.end()) throw DeserializationError("missing required field " + child(key), child(key));
    return Reader(*it, child(key));
  }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  std::string str() const {
    if (!j_.is_string()) fail("a string");
    return j_.get<std::string>();
  }
  double number() const {
    if (!j_.is_number()) fail("a number");
    return j_.get<double>();
  }
  std::uint64_t unsigned_int() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0)) {
      fail("a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }
  std::vector<Reader> elements() const {
    expect(json::value_t::array, "an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < j_.size(); ++i) {
      out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }
  std::vector<std::pair<std::string, Reader>> entries() const {
    expect(json::value_t::object, "an object");
    std::vector<std::pair<std::string, Reader>> out;
    for (const auto& [key, value] : j_.items()) out.emplace_back(key, Reader(value, child(key)));
    return out;
  }
  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const char* expected) const {
    throw DeserializationError("expected " + std::string(expected) + " at " + path_, path_);
  }

 private:
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  void expect(json::value_t type, const char* expected) const {
    if (j_.type() != type) fail(expected);
  }

  const json& j_;
  std::string path_;
};

json score_map_json(const metrics::ScoreMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

metrics::ScoreMap read_score_map(const Reader& r) {
  metrics::ScoreMap m;
  for (const auto& [k, v] : r.entries()) m[k] = v.number();
  return m;
}

std::map<std::string, std::string> read_string_map(const Reader& r) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : r.entries()) m[k] = v.str();
  return m;
}

json task_result_json(const tasks::TaskResult& r) {
  return {{"task", r.task},     {"model", r.model},   {"metric", r.metric}, {"u_orig", r.u_orig},
          {"u_priv", r.u_priv}, {"delta", r.delta},   {"n_test", r.n_test}};
}

tasks::TaskResult read_task_result(const Reader& r) {
  tasks::TaskResult t;
  t.task = r.field("task").str();
  t.model = r.field("model").str();
  t.metric = r.field("metric").str();
  t.u_orig = r.field("u_orig").number();
  t.u_priv = r.field("u_priv").number();
  t.delta = r.field("delta").number();
  t.n_test = r.field("n_test").unsigned_int();
  return t;
}

void check_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) throw ValidationError("non-finite value at " + where);
}

}  // namespace

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::kOk: return "ok";
    case CellStatus::kError: return "error";
    case CellStatus::kSkipped: return "skipped";
  }
  return "?";
}

CellStatus parse_cell_status(std::string_view name) {
  if (name == "ok") return CellStatus::kOk;
  if (name == "error") return CellStatus::kError;
  if (name == "skipped") return CellStatus::kSkipped;
  throw ValidationError("unknown cell status '" + std::string(name) + "'");
}

std::optional<double> MetricCell::primary() const {
  if (status != CellStatus::kOk || !aggregate) return std::nullopt;
  auto it = aggregate->find(primary_key);
  if (it == aggregate->end()) return std::nullopt;
  return it->second;
}

bool ExperimentResult::has_failures() const {
  return std::any_of(task_cells.begin(), task_cells.end(),
                     [](const TaskCell& c) { return c.status == CellStatus::kError; }) ||
         std::any_of(metric_cells.begin(), metric_cells.end(),
                     [](const MetricCell& c) { return c.status == CellStatus::kError; });
}

const TaskCell* ExperimentResult::find_task_cell(const std::string& anonymizer,
                                                 const std::string& task) const {
  for (const auto& c : task_cells) {
    if (c.anonymizer == anonymizer && c.task == task) return &c;
  }
  return nullptr;
}

const MetricCell* ExperimentResult::find_metric_cell(const std::string& anonymizer,
                                                     const std::string& task,
                                                     const std::string& metric) const {
  for (const auto& c : metric_cells) {
    if (c.anonymizer == anonymizer && c.task == task && c.metric == metric) return &c;
  }
  return nullptr;
}

namespace {

template <typename Cells, typename Get>
std::vector<std::string> ordered_unique(const Cells& cells, Get get) {
  std::vector<std::string> out;
  for (const auto& c : cells) {
    const std::string& v = get(c);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::string> ExperimentResult::anonymizer_names() const {
  auto names = ordered_unique(task_cells, [](const TaskCell& c) -> const std::string& {
    return c.anonymizer;
  });
  for (const auto& n : ordered_unique(metric_cells, [](const MetricCell& c) -> const std::string& {
         return c.anonymizer;
       })) {
    if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  }
  return names;
}

std::vector<std::string> ExperimentResult::task_names() const {
  auto names = ordered_unique(task_cells, [](const TaskCell& c) -> const std::string& {
    return c.task;
  });
  for (const auto& n : ordered_unique(metric_cells, [](const MetricCell& c) -> const std::string& {
         return c.task;
       })) {
    if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  }
  return names;
}

std::vector<std::string> ExperimentResult::metric_names() const {
  return ordered_unique(metric_cells, [](const MetricCell& c) -> const std::string& {
    return c.metric;
  });
}

json to_json(const ExperimentResult& r) {
  json task_cells = json::array();
  for (const auto& c : r.task_cells) {
    json j = {{"anonymizer", c.anonymizer}, {"task", c.task}, {"status", to_string(c.status)}};
    if (c.result) {
      check_finite(c.result->u_orig, c.anonymizer + "/" + c.task);
      check_finite(c.result->u_priv, c.anonymizer + "/" + c.task);
      j["result"] = task_result_json(*c.result);
    }
    if (c.error) j["error"] = *c.error;
    task_cells.push_back(std::move(j));
  }
  json metric_cells = json::array();
  for (const auto& c : r.metric_cells) {
    json j = {{"anonymizer", c.anonymizer},   {"task", c.task},
              {"metric", c.metric},           {"status", to_string(c.status)},
              {"primary_key", c.primary_key}, {"n_pairs", c.n_pairs}};
    if (c.aggregate) {
      for (const auto& [k, v] : *c.aggregate) check_finite(v, c.anonymizer + "/" + c.task + "/" + k);
      j["aggregate"] = score_map_json(*c.aggregate);
    }
    if (c.error) j["error"] = *c.error;
    metric_cells.push_back(std::move(j));
  }
  json baselines = json::object();
  for (const auto& [k, v] : r.random_baselines) baselines[k] = v;
  const Provenance& p = r.provenance;
  json provenance = {
      {"code_version", p.code_version},
      {"detector_version", p.detector_version},
      {"dataset_fingerprints", p.dataset_fingerprints},
      {"anonymizer_specs", p.anonymizer_specs},
      {"anonymizer_hashes", p.anonymizer_hashes},
      {"seeds", p.seeds},
      {"timestamps", p.timestamps},
  };
  return {{"exp_name", r.exp_name},         {"config", r.config},
          {"task_cells", task_cells},       {"metric_cells", metric_cells},
          {"random_baselines", baselines},  {"provenance", provenance},
          {"cache_keys", r.cache_keys}};
}

ExperimentResult result_from_json(const json& j) {
  const Reader root(j, "");
  ExperimentResult r;
  r.exp_name = root.field("exp_name").str();
  r.config = root.field("config").raw();
  for (const Reader& c : root.field("task_cells").elements()) {
    TaskCell cell;
    cell.anonymizer = c.field("anonymizer").str();
    cell.task = c.field("task").str();
    try {
      cell.status = parse_cell_status(c.field("status").str());
    } catch (const ValidationError& e) {
      throw DeserializationError(e.what(), c.path() + ".status");
    }
    if (c.has("result")) cell.result = read_task_result(c.field("result"));
    if (c.has("error")) cell.error = c.field("error").str();
    r.task_cells.push_back(std::move(cell));
  }
  for (const Reader& c : root.field("metric_cells").elements()) {
    MetricCell cell;
    cell.anonymizer = c.field("anonymizer").str();
    cell.task = c.field("task").str();
    cell.metric = c.field("metric").str();
    try {
      cell.status = parse_cell_status(c.field("status").str());
    } catch (const ValidationError& e) {
      throw DeserializationError(e.what(), c.path() + ".status");
    }
    cell.primary_key = c.field("primary_key").str();
    cell.n_pairs = c.field("n_pairs").unsigned_int();
    if (c.has("aggregate")) cell.aggregate = read_score_map(c.field("aggregate"));
    if (c.has("error")) cell.error = c.field("error").str();
    r.metric_cells.push_back(std::move(cell));
  }
  for (const auto& [k, v] : root.field("random_baselines").entries()) {
    r.random_baselines[k] = v.number();
  }
  const Reader p = root.field("provenance");
  r.provenance.code_version = p.field("code_version").str();
  r.provenance.detector_version = p.field("detector_version").str();
  r.provenance.dataset_fingerprints = read_string_map(p.field("dataset_fingerprints"));
  for (const auto& [k, v] : p.field("anonymizer_specs").entries()) {
    r.provenance.anonymizer_specs[k] = v.raw();
  }
  r.provenance.anonymizer_hashes = read_string_map(p.field("anonymizer_hashes"));
  for (const auto& [k, v] : p.field("seeds").entries()) r.provenance.seeds[k] = v.unsigned_int();
  r.provenance.timestamps = read_string_map(p.field("timestamps"));
  r.cache_keys = read_string_map(root.field("cache_keys"));
  return r;
}

std::string serialize_result(const ExperimentResult& result) {
  return to_json(result).dump(2) + "\n";
}

void serialize_result(const ExperimentResult& result, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_result(result));
}

ExperimentResult deserialize_result(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw DeserializationError(e.what(), path.string());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DeserializationError(path.string() + ": " + e.what(), "");
  }
  try {
    return result_from_json(j);
  } catch (const DeserializationError& e) {
    throw DeserializationError(path.string() + ": " + e.what(), e.path());
  }
}

}  // namespace anonbench::experiment
