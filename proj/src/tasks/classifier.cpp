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
#include <map>
#include <set>

#include "anonbench/error.hpp"
#include "anonbench/hash.hpp"
#include "anonbench/rng.hpp"
#include "anonbench/tasks.hpp"
#include "anonbench/utf8.hpp"

namespace anonbench::tasks {

namespace {

// Joins the two sides of a sentence pair; the unit separator never occurs in
// ordinary text, so n-grams spanning it are pair-specific.
constexpr std::u32string_view kPairSeparator = U" \x1F ";

using SparseRow = std::vector<std::pair<std::size_t, double>>;

std::vector<double> softmax_in_place(std::vector<double> z) {
  const double peak = *std::max_element(z.begin(), z.end());
  double total = 0;
  for (double& v : z) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

}  // namespace

SparseRow extract_features(const ModelInput& input, const FeatureConfig& config) {
  std::u32string cps = U" " + utf8::decode(input.text);
  if (input.text2) {
    cps += kPairSeparator;
    cps += utf8::decode(*input.text2);
  }
  cps += U" ";
  std::map<std::size_t, double> counts;
  for (int n = config.min_n; n <= config.max_n; ++n) {
    const auto width = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + width <= cps.size(); ++i) {
      const std::string gram = utf8::encode(std::u32string_view(cps).substr(i, width));
      counts[fnv1a64(gram) % config.dim] += 1.0;
    }
  }
  double norm = 0;
  for (const auto& [k, v] : counts) norm += v * v;
  norm = std::sqrt(norm);
  SparseRow row(counts.begin(), counts.end());
  if (norm > 0) {
    for (auto& [k, v] : row) v /= norm;
  }
  return row;
}

ClassifierModel::ClassifierModel(FeatureConfig features,
                                 std::vector<std::string> label_space,
                                 std::vector<double> weights, std::vector<double> bias,
                                 std::uint64_t train_seed)
    : features_(features),
      label_space_(std::move(label_space)),
      weights_(std::move(weights)),
      bias_(std::move(bias)),
      train_seed_(train_seed) {
  if (weights_.size() != label_space_.size() * features_.dim ||
      bias_.size() != label_space_.size()) {
    throw ArgumentError("classifier weights do not match label space and dimension");
  }
}

std::vector<double> ClassifierModel::logits(const ModelInput& input) const {
  const SparseRow x = extract_features(input, features_);
  std::vector<double> z = bias_;
  for (std::size_t k = 0; k < label_space_.size(); ++k) {
    const double* w = weights_.data() + k * features_.dim;
    for (const auto& [j, v] : x) z[k] += w[j] * v;
  }
  return z;
}

std::size_t ClassifierModel::predict(const ModelInput& input) const {
  const std::vector<double> z = logits(input);
  std::size_t best = 0;
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (z[k] > z[best]) best = k;
  }
  return best;
}

const std::string& ClassifierModel::predict_label(const ModelInput& input) const {
  return label_space_[predict(input)];
}

ClassifierModel train_classifier(const LabeledInputs& train, std::uint64_t seed,
                                 const TrainConfig& config, const FeatureConfig& features) {
  if (train.inputs.size() != train.labels.size()) {
    throw ArgumentError("train_classifier: inputs and labels differ in length");
  }
  const std::set<std::string> distinct(train.labels.begin(), train.labels.end());
  if (distinct.size() < 2) {
    throw TrainingError("training data has " + std::to_string(distinct.size()) +
                        " class(es); at least 2 are required");
  }
  std::vector<std::string> labels(distinct.begin(), distinct.end());
  std::map<std::string, std::size_t> label_index;
  for (std::size_t k = 0; k < labels.size(); ++k) label_index[labels[k]] = k;

  // Compact column space over features that actually occur.
  std::vector<SparseRow> rows;
  rows.reserve(train.inputs.size());
  std::map<std::size_t, std::size_t> column_of;
  for (const ModelInput& input : train.inputs) {
    rows.push_back(extract_features(input, features));
    for (const auto& [j, v] : rows.back()) column_of.emplace(j, 0);
  }
  std::vector<std::size_t> global;
  global.reserve(column_of.size());
  for (auto& [j, local] : column_of) {
    local = global.size();
    global.push_back(j);
  }
  for (SparseRow& row : rows) {
    for (auto& [j, v] : row) j = column_of.at(j);
  }

  const std::size_t n = rows.size();
  const std::size_t k_count = labels.size();
  const std::size_t f_count = global.size();
  std::vector<std::size_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = label_index.at(train.labels[i]);

  Rng rng(mix_seed(seed, 0x7a11));
  std::vector<double> w(k_count * f_count);
  for (double& v : w) v = (uniform_unit(rng) - 0.5) * 0.02;
  std::vector<double> b(k_count, 0.0);

  std::vector<double> grad_w(w.size());
  std::vector<double> grad_b(k_count);
  std::vector<double> z(k_count);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < k_count; ++k) {
        double s = b[k];
        const double* wk = w.data() + k * f_count;
        for (const auto& [j, v] : rows[i]) s += wk[j] * v;
        z[k] = s;
      }
      const std::vector<double> p = softmax_in_place(z);
      for (std::size_t k = 0; k < k_count; ++k) {
        const double g = p[k] - (k == y[i] ? 1.0 : 0.0);
        grad_b[k] += g;
        double* gk = grad_w.data() + k * f_count;
        for (const auto& [j, v] : rows[i]) gk[j] += g * v;
      }
    }
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
      w[idx] -= config.learning_rate * (grad_w[idx] * inv_n + config.l2 * w[idx]);
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      b[k] -= config.learning_rate * grad_b[k] * inv_n;
    }
  }

  std::vector<double> dense(k_count * features.dim, 0.0);
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t c = 0; c < f_count; ++c) {
      dense[k * features.dim + global[c]] = w[k * f_count + c];
    }
  }
  return ClassifierModel(features, std::move(labels), std::move(dense), std::move(b), seed);
}

ClassifierModel train_classifier(const corpus::Dataset& train, const TaskSpec& spec,
                                 std::uint64_t seed, const TrainConfig& config,
                                 const FeatureConfig& features) {
  return train_classifier(labeled_inputs(train, spec), seed, config, features);
}

double evaluate_classifier(const ClassifierModel& model, const LabeledInputs& test,
                           TaskMetric metric, std::optional<std::string> positive_class) {
  if (test.inputs.empty()) throw ValidationError("evaluate_classifier: empty test set");
  const auto& space = model.label_space();
  for (const std::string& label : test.labels) {
    if (!std::binary_search(space.begin(), space.end(), label)) {
      throw ValidationError("test label " + label + " is outside the model's label space");
    }
  }
  std::vector<std::size_t> predicted(test.inputs.size());
  for (std::size_t i = 0; i < test.inputs.size(); ++i) {
    predicted[i] = model.predict(test.inputs[i]);
  }
  if (metric == TaskMetric::kAccuracy) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      correct += space[predicted[i]] == test.labels[i];
    }
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
  }
  const std::string positive = positive_class.value_or(space.back());
  if (!std::binary_search(space.begin(), space.end(), positive)) {
    throw ValidationError("positive class " + positive + " is outside the model's label space");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool pred = space[predicted[i]] == positive;
    const bool gold = test.labels[i] == positive;
    tp += pred && gold;
    fp += pred && !gold;
    fn += !pred && gold;
  }
  const double precision = tp + fp ? static_cast<double>(tp) / double(tp + fp) : 0.0;
  const double recall = tp + fn ? static_cast<double>(tp) / double(tp + fn) : 0.0;
  return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

double evaluate_classifier(const ClassifierModel& model, const corpus::Dataset& test,
                           const TaskSpec& spec) {
  return evaluate_classifier(model, labeled_inputs(test, spec), spec.metric,
                             spec.positive_class);
}

}  // namespace anonbench::tasks
