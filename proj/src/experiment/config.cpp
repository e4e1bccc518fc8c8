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

#include <set>

#include "anonbench/error.hpp"
#include "anonbench/experiment.hpp"
#include "anonbench/fsutil.hpp"
#include "anonbench/hash.hpp"
#include "anonbench/synth.hpp"

namespace anonbench::experiment {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

fs::path resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

corpus::FieldMapping schema_of(const json& j, const std::string& where) {
  if (!j.contains("schema")) return {};
  const json& s = j.at("schema");
  if (s.is_string()) return corpus::FieldMapping::parse(s.get<std::string>());
  if (!s.is_object()) throw ConfigError(where + ": schema must be a string or an object");
  std::map<std::string, std::string> columns;
  for (const auto& [field, column] : s.items()) columns[field] = column.get<std::string>();
  return corpus::FieldMapping(std::move(columns));
}

std::shared_ptr<const corpus::Dataset> load_split(const json& source, const json& task,
                                                  corpus::Split split, const fs::path& base,
                                                  const std::string& where) {
  std::string path;
  corpus::FieldMapping schema = schema_of(task, where);
  std::optional<std::string> name;
  if (source.is_string()) {
    path = source.get<std::string>();
  } else if (source.is_object()) {
    check_keys(source, {"path", "schema", "name"}, where);
    path = source.at("path").get<std::string>();
    if (source.contains("schema")) schema = schema_of(source, where);
    if (source.contains("name")) name = source.at("name").get<std::string>();
  } else {
    throw ConfigError(where + ": dataset must be a path or an object");
  }
  corpus::LoadOptions options;
  options.split = split;
  options.name = name;
  return std::make_shared<const corpus::Dataset>(
      corpus::load_dataset(resolve(base, path), schema, options));
}

void load_synthetic(const json& s, tasks::TaskSpec& spec, const std::string& where) {
  check_keys(s, {"generator", "seed", "n", "n_train", "n_test", "n_authors", "train_per_author",
                 "test_per_author", "tagged_fraction"},
             where);
  const std::string generator = s.at("generator").get<std::string>();
  const std::uint64_t seed = s.value("seed", std::uint64_t{0});
  auto put = [&spec](corpus::SynthTask t) {
    spec.train = std::make_shared<const corpus::Dataset>(std::move(t.train));
    spec.test = std::make_shared<const corpus::Dataset>(std::move(t.test));
  };
  if (generator == "pii") {
    spec.test = std::make_shared<const corpus::Dataset>(
        corpus::synth_pii_corpus(seed, s.value("n", std::size_t{200})));
  } else if (generator == "category") {
    put(corpus::synth_category_task(seed, s.value("n_train", std::size_t{500}),
                                    s.value("n_test", std::size_t{500}),
                                    s.value("tagged_fraction", 0.4)));
  } else if (generator == "topic") {
    put(corpus::synth_topic_task(seed, s.value("n_train", std::size_t{300}),
                                 s.value("n_test", std::size_t{300})));
  } else if (generator == "authorship") {
    put(corpus::synth_authorship_task(seed, s.value("n_authors", std::size_t{10}),
                                      s.value("train_per_author", std::size_t{30}),
                                      s.value("test_per_author", std::size_t{20})));
  } else {
    throw ConfigError(where + ": unknown synthetic generator '" + generator + "'");
  }
}

tasks::TaskSpec task_from_json(const json& j, const fs::path& base, std::size_t index) {
  std::string where = "tasks[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  check_keys(j, {"name", "kind", "train", "test", "schema", "synthetic", "metric", "fields",
                 "positive_class", "plugin", "params"},
             where);
  tasks::TaskSpec spec;
  spec.name = j.at("name").get<std::string>();
  where += " (" + spec.name + ")";
  spec.kind = tasks::parse_task_kind(j.at("kind").get<std::string>());
  if (j.contains("metric")) spec.metric = tasks::parse_task_metric(j.at("metric").get<std::string>());
  if (j.contains("fields")) spec.fields = tasks::parse_input_fields(j.at("fields").get<std::string>());
  if (j.contains("positive_class")) spec.positive_class = j.at("positive_class").get<std::string>();
  if (j.contains("plugin")) spec.plugin = j.at("plugin").get<std::string>();
  if (j.contains("params")) spec.params = j.at("params");
  if (j.contains("synthetic")) {
    if (j.contains("train") || j.contains("test")) {
      throw ConfigError(where + ": synthetic and file datasets are exclusive");
    }
    load_synthetic(j.at("synthetic"), spec, where);
  } else {
    if (!j.contains("test")) throw ConfigError(where + ": missing test dataset");
    spec.test = load_split(j.at("test"), j, corpus::Split::kTest, base, where);
    if (j.contains("train")) {
      spec.train = load_split(j.at("train"), j, corpus::Split::kTrain, base, where);
    }
  }
  return spec;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.exp_name.empty()) throw ConfigError("exp_name is empty");
  if (config.tasks.empty() && config.metrics.empty()) {
    throw ConfigError("config requests neither tasks nor metrics");
  }
  std::set<std::string> names;
  for (const auto& spec : config.anonymizers) {
    anonymize::validate(spec);
    if (!names.insert(spec.name).second) {
      throw ConfigError("duplicate anonymizer name '" + spec.name + "'");
    }
  }
  names.clear();
  for (const auto& task : config.tasks) {
    if (!names.insert(task.name).second) {
      throw ConfigError("duplicate task name '" + task.name + "'");
    }
    try {
      tasks::validate(task);
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }
  names.clear();
  for (const auto& metric : config.metrics) {
    if (!metrics::is_registered_metric(metric)) throw ConfigError("unknown metric '" + metric + "'");
    if (!names.insert(metric).second) throw ConfigError("duplicate metric '" + metric + "'");
  }
  if (config.max_concurrency == 0) throw ConfigError("max_concurrency must be positive");
}

ExperimentConfig config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be an object");
  check_keys(j, {"exp_name", "anonymizers", "tasks", "metrics", "classifier_seed",
                 "train_task_models", "train_with_generations", "cache_dir", "output_dir",
                 "sample_store_count", "max_concurrency", "backends"},
             "config");
  ExperimentConfig c;
  try {
    c.exp_name = j.at("exp_name").get<std::string>();
    for (const json& a : j.value("anonymizers", json::array())) {
      c.anonymizers.push_back(anonymize::spec_from_json(a));
    }
    std::size_t index = 0;
    for (const json& t : j.value("tasks", json::array())) {
      c.tasks.push_back(task_from_json(t, base_dir, index++));
    }
    c.metrics = j.value("metrics", std::vector<std::string>{});
    c.classifier_seed = j.value("classifier_seed", std::uint64_t{0});
    c.train_task_models = j.value("train_task_models", true);
    c.train_with_generations = j.value("train_with_generations", false);
    if (j.contains("cache_dir")) c.cache_dir = resolve(base_dir, j.at("cache_dir").get<std::string>());
    if (j.contains("output_dir")) {
      c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    }
    c.sample_store_count = j.value("sample_store_count", std::size_t{20});
    c.max_concurrency = j.value("max_concurrency", std::size_t{1});
    c.backends = j.value("backends", json::object());
    if (!c.backends.is_object()) throw ConfigError("backends must be an object");
    if (c.backends.contains("referenceless") &&
        c.backends.at("referenceless").contains("reference_corpus")) {
      json& ref = c.backends.at("referenceless").at("reference_corpus");
      std::vector<std::string> texts;
      if (ref.is_string()) {
        for (const auto& r : corpus::load_dataset(resolve(base_dir, ref.get<std::string>())).records()) {
          texts.push_back(r.text);
        }
      } else {
        texts = ref.get<std::vector<std::string>>();
      }
      c.backends.at("referenceless").erase("reference_corpus");
      c.reference_corpus = std::move(texts);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

json config_echo(const ExperimentConfig& c) {
  json anonymizers = json::array();
  for (const auto& a : c.anonymizers) anonymizers.push_back(anonymize::to_json(a));
  json task_list = json::array();
  for (const auto& t : c.tasks) task_list.push_back(tasks::to_json(t));
  json echo = {
      {"exp_name", c.exp_name},
      {"anonymizers", anonymizers},
      {"tasks", task_list},
      {"metrics", c.metrics},
      {"classifier_seed", c.classifier_seed},
      {"train_task_models", c.train_task_models},
      {"train_with_generations", c.train_with_generations},
      {"sample_store_count", c.sample_store_count},
      {"backends", c.backends},
  };
  if (c.reference_corpus) {
    ContentHasher h;
    h.add(static_cast<std::int64_t>(c.reference_corpus->size()));
    for (const auto& t : *c.reference_corpus) h.add(t);
    echo["reference_corpus"] = {{"size", c.reference_corpus->size()}, {"sha256", h.hex()}};
  }
  if (c.seed_override) echo["seed_override"] = *c.seed_override;
  return echo;
}

void apply_seed_override(ExperimentConfig& config, std::uint64_t seed) {
  config.seed_override = seed;
  config.classifier_seed = seed;
  for (auto& a : config.anonymizers) a.seed = seed;
}

}  // namespace anonbench::experiment
