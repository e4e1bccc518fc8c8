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

#include <map>
#include <mutex>
#include <set>

#include "anonbench/error.hpp"
#include "anonbench/tasks.hpp"

namespace anonbench::tasks {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view name, const std::pair<E, std::string_view> (&table)[N],
             const char* what) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  throw ConfigError(std::string("unknown ") + what + ": " + std::string(name));
}

constexpr std::pair<TaskKind, std::string_view> kKinds[] = {
    {TaskKind::kClassification, "classification"},
    {TaskKind::kDeidentification, "deidentification"},
    {TaskKind::kAuthorship, "authorship"},
    {TaskKind::kCustom, "custom"},
};
constexpr std::pair<TaskMetric, std::string_view> kMetrics[] = {
    {TaskMetric::kAccuracy, "accuracy"},
    {TaskMetric::kF1Binary, "f1_binary"},
};
constexpr std::pair<InputFields, std::string_view> kFields[] = {
    {InputFields::kText, "text"},
    {InputFields::kTextPair, "text+text2"},
};

template <typename E, std::size_t N>
std::string_view name_of(E value, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "?";
}

void require_targets(const corpus::Dataset& d, const TaskSpec& spec) {
  for (const auto& r : d.records()) {
    if (!target_of(r, spec.kind)) {
      throw ValidationError("task " + spec.name + ": record " + r.id + " in " + d.name() +
                            " has no " +
                            (spec.kind == TaskKind::kAuthorship ? "author" : "label"));
    }
    if (spec.fields == InputFields::kTextPair && !r.text2) {
      throw ValidationError("task " + spec.name + ": record " + r.id + " in " + d.name() +
                            " has no text2");
    }
  }
}

struct TaskRegistry {
  std::mutex mutex;
  std::map<std::string, CustomTaskFactory> factories;
};

TaskRegistry& task_registry() {
  static TaskRegistry r;
  return r;
}

}  // namespace

std::string_view to_string(TaskKind kind) { return name_of(kind, kKinds); }
TaskKind parse_task_kind(std::string_view name) { return parse_enum(name, kKinds, "task kind"); }
std::string_view to_string(TaskMetric metric) { return name_of(metric, kMetrics); }
TaskMetric parse_task_metric(std::string_view name) {
  return parse_enum(name, kMetrics, "task metric");
}
std::string_view to_string(InputFields fields) { return name_of(fields, kFields); }
InputFields parse_input_fields(std::string_view name) {
  return parse_enum(name, kFields, "input fields");
}

bool TaskSpec::is_privacy() const {
  return kind == TaskKind::kDeidentification || kind == TaskKind::kAuthorship;
}

bool TaskSpec::trains_classifier() const {
  return kind == TaskKind::kClassification || kind == TaskKind::kAuthorship;
}

std::optional<std::string> target_of(const corpus::Record& record, TaskKind kind) {
  if (kind == TaskKind::kAuthorship && record.author) return record.author;
  return record.label;
}

void validate(const TaskSpec& spec) {
  if (spec.name.empty()) throw ValidationError("task name is empty");
  if (!spec.test) throw ValidationError("task " + spec.name + ": no test split");
  switch (spec.kind) {
    case TaskKind::kClassification:
    case TaskKind::kAuthorship: {
      if (!spec.train) throw ValidationError("task " + spec.name + ": no train split");
      require_targets(*spec.train, spec);
      require_targets(*spec.test, spec);
      if (spec.positive_class) {
        std::set<std::string> labels;
        for (const auto& r : spec.train->records()) labels.insert(*target_of(r, spec.kind));
        if (!labels.contains(*spec.positive_class)) {
          throw ValidationError("task " + spec.name + ": positive class " +
                                *spec.positive_class + " does not occur in training data");
        }
      }
      break;
    }
    case TaskKind::kDeidentification:
      if (!spec.test->has_gold_spans()) {
        throw ValidationError("task " + spec.name + ": test split " + spec.test->name() +
                              " lacks gold spans");
      }
      break;
    case TaskKind::kCustom:
      if (!spec.plugin || spec.plugin->empty()) {
        throw ValidationError("task " + spec.name + ": custom task without plugin");
      }
      break;
  }
}

nlohmann::json to_json(const TaskSpec& spec) {
  auto describe = [](const std::shared_ptr<const corpus::Dataset>& d) -> nlohmann::json {
    if (!d) return nullptr;
    return {{"name", d->name()}, {"fingerprint", d->fingerprint()}, {"size", d->size()}};
  };
  nlohmann::json j = {
      {"name", spec.name},
      {"kind", to_string(spec.kind)},
      {"metric", to_string(spec.metric)},
      {"fields", to_string(spec.fields)},
      {"train", describe(spec.train)},
      {"test", describe(spec.test)},
  };
  if (spec.positive_class) j["positive_class"] = *spec.positive_class;
  if (spec.plugin) j["plugin"] = *spec.plugin;
  if (!spec.params.empty()) j["params"] = spec.params;
  return j;
}

LabeledInputs labeled_inputs(const corpus::Dataset& data, const TaskSpec& spec,
                             const AnonymizedSplit* anonymized) {
  if (anonymized && anonymized->text.size() != data.size()) {
    throw ValidationError("task " + spec.name + ": " + std::to_string(anonymized->text.size()) +
                          " anonymized texts for " + std::to_string(data.size()) + " records");
  }
  const bool pair = spec.fields == InputFields::kTextPair;
  if (pair && anonymized && anonymized->text2.size() != data.size()) {
    throw ValidationError("task " + spec.name + ": anonymized split lacks text2");
  }
  require_targets(data, spec);
  LabeledInputs out;
  out.inputs.reserve(data.size());
  out.labels.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& r = data[i];
    ModelInput input;
    input.text = anonymized ? anonymized->text[i] : r.text;
    if (pair) input.text2 = anonymized ? anonymized->text2[i] : *r.text2;
    out.inputs.push_back(std::move(input));
    out.labels.push_back(*target_of(r, spec.kind));
  }
  return out;
}

TaskResult make_task_result(std::string task, std::string model, std::string metric,
                            double u_orig, double u_priv, std::size_t n_test) {
  TaskResult r;
  r.task = std::move(task);
  r.model = std::move(model);
  r.metric = std::move(metric);
  r.u_orig = u_orig;
  r.u_priv = u_priv;
  r.delta = u_orig - u_priv;
  r.n_test = n_test;
  return r;
}

void register_task(const std::string& plugin, CustomTaskFactory factory) {
  auto& r = task_registry();
  std::lock_guard lock(r.mutex);
  r.factories[plugin] = std::move(factory);
}

std::unique_ptr<CustomTask> make_custom_task(const TaskSpec& spec) {
  CustomTaskFactory factory;
  {
    auto& r = task_registry();
    std::lock_guard lock(r.mutex);
    auto it = spec.plugin ? r.factories.find(*spec.plugin) : r.factories.end();
    if (it == r.factories.end()) {
      throw ConfigError("task " + spec.name + ": unknown task plugin " +
                        spec.plugin.value_or("<none>"));
    }
    factory = it->second;
  }
  return factory(spec);
}

}  // namespace anonbench::tasks
