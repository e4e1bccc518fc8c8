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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "anonbench/anonymize.hpp"
#include "anonbench/metrics.hpp"
#include "anonbench/tasks.hpp"
#include "json.hpp"

namespace anonbench::experiment {

inline constexpr std::string_view kCodeVersion = "anonbench 0.1.0";

struct ExperimentConfig {
  std::string exp_name;
  std::vector<anonymize::AnonymizerSpec> anonymizers;
  std::vector<tasks::TaskSpec> tasks;
  std::vector<std::string> metrics;
  std::uint64_t classifier_seed = 0;
  bool train_task_models = true;
  bool train_with_generations = false;
  /// Empty disables the on-disk anonymization cache.
  std::filesystem::path cache_dir;
  /// Empty disables persisting results and samples.
  std::filesystem::path output_dir;
  std::size_t sample_store_count = 20;
  /// Cells evaluated concurrently.
  std::size_t max_concurrency = 1;
  /// Metric backend selection, see metrics::MetricContext.
  nlohmann::json backends = nlohmann::json::object();
  /// Fitting corpus for reference-less metrics; defaults to each task's
  /// original training texts.
  std::optional<std::vector<std::string>> reference_corpus;
  /// Set when a global seed override was applied.
  std::optional<std::uint64_t> seed_override;
};

/// Throws ConfigError on empty names, duplicate anonymizer or task names,
/// unknown metrics and invalid anonymizer or task specs.
void validate(const ExperimentConfig& config);

/// Parses a config document. Relative dataset, cache and output paths are
/// resolved against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Echo of the config stored in results: datasets by name and fingerprint,
/// no filesystem paths.
nlohmann::json config_echo(const ExperimentConfig& config);

/// Sets the classifier seed and every anonymizer seed to `seed`.
void apply_seed_override(ExperimentConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Results

enum class CellStatus { kOk, kError, kSkipped };
std::string_view to_string(CellStatus status);
CellStatus parse_cell_status(std::string_view name);

struct TaskCell {
  std::string anonymizer;
  std::string task;
  CellStatus status = CellStatus::kOk;
  std::optional<tasks::TaskResult> result;
  std::optional<std::string> error;

  bool operator==(const TaskCell&) const = default;
};

struct MetricCell {
  std::string anonymizer;
  std::string task;
  std::string metric;
  CellStatus status = CellStatus::kOk;
  std::string primary_key;
  std::size_t n_pairs = 0;
  std::optional<metrics::ScoreMap> aggregate;
  std::optional<std::string> error;

  /// The aggregate at primary_key; absent unless the cell succeeded.
  std::optional<double> primary() const;
  bool operator==(const MetricCell&) const = default;
};

struct Provenance {
  std::string code_version;
  std::string detector_version;
  /// "<task>/<split>" -> dataset fingerprint.
  std::map<std::string, std::string> dataset_fingerprints;
  /// Anonymizer name -> spec as configured.
  std::map<std::string, nlohmann::json> anonymizer_specs;
  /// Anonymizer name -> spec hash.
  std::map<std::string, std::string> anonymizer_hashes;
  std::map<std::string, std::uint64_t> seeds;
  /// Wall-clock times, the only nondeterministic part of a result.
  std::map<std::string, std::string> timestamps;

  bool operator==(const Provenance&) const = default;
};

struct ExperimentResult {
  std::string exp_name;
  nlohmann::json config;
  std::vector<TaskCell> task_cells;
  std::vector<MetricCell> metric_cells;
  /// Task name -> expected score of the random label-distribution baseline.
  std::map<std::string, double> random_baselines;
  Provenance provenance;
  /// "<anonymizer>/<task>/<split>" -> cache file key.
  std::map<std::string, std::string> cache_keys;

  bool operator==(const ExperimentResult&) const = default;

  bool has_failures() const;
  const TaskCell* find_task_cell(const std::string& anonymizer,
                                 const std::string& task) const;
  const MetricCell* find_metric_cell(const std::string& anonymizer,
                                     const std::string& task,
                                     const std::string& metric) const;
  std::vector<std::string> anonymizer_names() const;
  std::vector<std::string> task_names() const;
  std::vector<std::string> metric_names() const;
};

nlohmann::json to_json(const ExperimentResult& result);
/// Strict parse. Throws DeserializationError naming the offending path, e.g.
/// `task_cells[2].result.u_priv`.
ExperimentResult result_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, shortest round-trip numbers, trailing newline.
std::string serialize_result(const ExperimentResult& result);
void serialize_result(const ExperimentResult& result, const std::filesystem::path& path);
ExperimentResult deserialize_result(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Cache

/// Anonymized texts on disk, one file per (spec hash, dataset fingerprint).
class AnonymizationCache {
 public:
  explicit AnonymizationCache(std::filesystem::path dir);

  static std::string key(const anonymize::AnonymizerSpec& spec,
                         const std::string& dataset_fingerprint);

  std::optional<std::string> lookup(const anonymize::AnonymizerSpec& spec,
                                    const std::string& dataset_fingerprint,
                                    const std::string& record_id);
  /// Merges `entries` (record id -> text) into the file; written atomically.
  void store(const anonymize::AnonymizerSpec& spec,
             const std::string& dataset_fingerprint,
             const std::map<std::string, std::string>& entries);
  void store(const anonymize::AnonymizerSpec& spec,
             const std::string& dataset_fingerprint, const std::string& record_id,
             const std::string& text);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  using Entries = std::map<std::string, std::string>;
  Entries& load(const std::string& key);

  std::filesystem::path dir_;
  std::mutex mutex_;
  std::map<std::string, Entries> loaded_;
};

// ---------------------------------------------------------------------------
// Running

struct RunStats {
  std::size_t anonymizer_invocations = 0;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
};

struct RunHooks {
  /// Replaces anonymize::make_anonymizer, e.g. to instrument calls.
  std::function<std::unique_ptr<anonymize::Anonymizer>(const anonymize::AnonymizerSpec&)>
      anonymizer_factory;
};

struct RunOutcome {
  ExperimentResult result;
  RunStats stats;
};

/// Evaluates every anonymizer on every task and metric. Cell failures are
/// recorded and the run continues. Writes `results.json` and per-cell sample
/// files under output_dir when it is set.
RunOutcome run_experiment(const ExperimentConfig& config, const RunHooks& hooks = {});

/// File name used for a cell's samples: samples/<anonymizer>/<task>.jsonl.
std::filesystem::path sample_path(const std::filesystem::path& output_dir,
                                  const std::string& anonymizer, const std::string& task);

}  // namespace anonbench::experiment
