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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anonbench/anonymize.hpp"
#include "anonbench/corpus.hpp"
#include "anonbench/metrics.hpp"
#include "json.hpp"

namespace anonbench::tasks {

enum class TaskKind { kClassification, kDeidentification, kAuthorship, kCustom };
enum class TaskMetric { kAccuracy, kF1Binary };
enum class InputFields { kText, kTextPair };

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view name);
std::string_view to_string(TaskMetric metric);
TaskMetric parse_task_metric(std::string_view name);
std::string_view to_string(InputFields fields);
InputFields parse_input_fields(std::string_view name);

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::kClassification;
  /// Absent for de-identification and custom tasks that do not train.
  std::shared_ptr<const corpus::Dataset> train;
  std::shared_ptr<const corpus::Dataset> test;
  TaskMetric metric = TaskMetric::kAccuracy;
  InputFields fields = InputFields::kText;
  /// Positive class for f1_binary; defaults to the last label.
  std::optional<std::string> positive_class;
  /// Registered implementation for kind=custom.
  std::optional<std::string> plugin;
  nlohmann::json params = nlohmann::json::object();

  /// Privacy tasks: de-identification and authorship.
  bool is_privacy() const;
  bool trains_classifier() const;
};

/// Checks kind-specific dataset requirements. Throws ValidationError.
void validate(const TaskSpec& spec);

/// Description of the task for result files: datasets by name and
/// fingerprint, never by path.
nlohmann::json to_json(const TaskSpec& spec);

/// The prediction target of `record` under `kind`: the author for authorship
/// tasks (falling back to the label), the label otherwise.
std::optional<std::string> target_of(const corpus::Record& record, TaskKind kind);

/// Anonymized texts of one split, aligned with its records. `text2` is empty
/// for single-text datasets.
struct AnonymizedSplit {
  std::vector<std::string> text;
  std::vector<std::string> text2;
};

// ---------------------------------------------------------------------------
// Classifier

struct FeatureConfig {
  int min_n = 3;
  int max_n = 5;
  std::size_t dim = std::size_t{1} << 18;

  bool operator==(const FeatureConfig&) const = default;
};

struct TrainConfig {
  int epochs = 300;
  double learning_rate = 8.0;
  double l2 = 1e-5;
};

/// Model input: the text, or both texts of a sentence pair.
struct ModelInput {
  std::string text;
  std::optional<std::string> text2;
};

/// Multinomial logistic regression over hashed character n-gram counts.
class ClassifierModel {
 public:
  ClassifierModel(FeatureConfig features, std::vector<std::string> label_space,
                  std::vector<double> weights, std::vector<double> bias,
                  std::uint64_t train_seed);

  const FeatureConfig& features() const { return features_; }
  const std::vector<std::string>& label_space() const { return label_space_; }
  /// Row-major |label_space| x features().dim.
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& bias() const { return bias_; }
  std::uint64_t train_seed() const { return train_seed_; }

  std::vector<double> logits(const ModelInput& input) const;
  /// Index into label_space(); ties go to the lowest index.
  std::size_t predict(const ModelInput& input) const;
  const std::string& predict_label(const ModelInput& input) const;

 private:
  FeatureConfig features_;
  std::vector<std::string> label_space_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  std::uint64_t train_seed_;
};

/// Sparse L2-normalized feature vector as (index, value) pairs sorted by index.
std::vector<std::pair<std::size_t, double>> extract_features(
    const ModelInput& input, const FeatureConfig& config);

struct LabeledInputs {
  std::vector<ModelInput> inputs;
  std::vector<std::string> labels;
};

/// Inputs and targets of `data` under `spec`. When `anonymized` is given its
/// texts replace the record texts. Throws ValidationError on missing targets.
LabeledInputs labeled_inputs(const corpus::Dataset& data, const TaskSpec& spec,
                             const AnonymizedSplit* anonymized = nullptr);

/// Deterministic full-batch gradient descent. Throws ValidationError on
/// unlabeled data and TrainingError when fewer than two classes occur.
ClassifierModel train_classifier(const corpus::Dataset& train, const TaskSpec& spec,
                                 std::uint64_t seed, const TrainConfig& config = {},
                                 const FeatureConfig& features = {});
ClassifierModel train_classifier(const LabeledInputs& train, std::uint64_t seed,
                                 const TrainConfig& config = {},
                                 const FeatureConfig& features = {});

/// Accuracy or positive-class F1 (0 when precision and recall are both
/// undefined). Throws ValidationError for labels outside the model's space.
double evaluate_classifier(const ClassifierModel& model, const LabeledInputs& test,
                           TaskMetric metric,
                           std::optional<std::string> positive_class = {});
double evaluate_classifier(const ClassifierModel& model, const corpus::Dataset& test,
                           const TaskSpec& spec);

// ---------------------------------------------------------------------------
// Privacy and utility runs

/// Fraction of gold spans whose surface no longer occurs in the anonymized
/// text (ASCII case-insensitive). 1.0 when there are no spans.
double masked_entity_recall(const corpus::Dataset& test,
                            std::span<const std::string> anonymized_texts);

using SplitAnonymizer = std::function<AnonymizedSplit(const corpus::Dataset&)>;

/// Anonymizes both text fields of every record with `anonymizer`.
AnonymizedSplit anonymize_split(anonymize::Anonymizer& anonymizer,
                                const corpus::Dataset& data);
SplitAnonymizer direct_split_anonymizer(const anonymize::AnonymizerSpec& spec);

struct TaskResult {
  std::string task;
  std::string model;
  std::string metric;
  double u_orig = 0;
  double u_priv = 0;
  double delta = 0;
  std::size_t n_test = 0;

  bool operator==(const TaskResult&) const = default;
};

TaskResult make_task_result(std::string task, std::string model, std::string metric,
                            double u_orig, double u_priv, std::size_t n_test);

struct RunOptions {
  std::uint64_t classifier_seed = 0;
  bool train_with_generations = false;
  TrainConfig train;
  FeatureConfig features;
};

/// Runs one (task, anonymizer) cell. `pretrained`, when given, is used as
/// the model trained on the original train split.
TaskResult run_task(const TaskSpec& spec, const std::string& model_name,
                    const SplitAnonymizer& anonymizer, const RunOptions& options,
                    const ClassifierModel* pretrained = nullptr);

/// Classification tasks. Throws ArgumentError for other kinds.
TaskResult run_utility_task(const TaskSpec& spec,
                            const anonymize::AnonymizerSpec& anonymizer,
                            const RunOptions& options = {});
/// De-identification and authorship tasks. Throws ArgumentError otherwise.
TaskResult run_privacy_task(const TaskSpec& spec,
                            const anonymize::AnonymizerSpec& anonymizer,
                            const RunOptions& options = {});

// ---------------------------------------------------------------------------
// Random baseline

/// Expected score of predictions drawn from the empirical target
/// distribution of `test`: analytic for accuracy, a seeded simulation over
/// `rounds` full prediction sweeps for f1_binary.
double random_baseline(const corpus::Dataset& test, const TaskSpec& spec,
                       std::uint64_t seed, std::size_t rounds = 200);
double random_baseline(std::span<const std::string> labels, TaskMetric metric,
                       std::uint64_t seed,
                       std::optional<std::string> positive_class = {},
                       std::size_t rounds = 200);

/// Accuracy of `draws` single predictions sampled from the empirical
/// distribution against uniformly drawn test labels.
double simulate_random_accuracy(std::span<const std::string> labels,
                                std::uint64_t seed, std::size_t draws);

// ---------------------------------------------------------------------------
// Custom tasks

/// Scores anonymized texts aligned with the task's test records.
class CustomTask {
 public:
  virtual ~CustomTask() = default;
  virtual metrics::ScoreMap evaluate(std::span<const std::string> texts) = 0;
  /// Score reported as u_orig / u_priv.
  virtual std::string primary_key() const { return "score"; }
};

using CustomTaskFactory = std::function<std::unique_ptr<CustomTask>(const TaskSpec&)>;

void register_task(const std::string& plugin, CustomTaskFactory factory);
std::unique_ptr<CustomTask> make_custom_task(const TaskSpec& spec);

}  // namespace anonbench::tasks
