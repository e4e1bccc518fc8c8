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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anonbench/experiment.hpp"

namespace anonbench::analysis {

/// Tie-corrected Kendall rank correlation (tau-b), O(n log n). Throws
/// ArgumentError on length mismatch, fewer than two values or non-finite
/// input, and DegenerateInputError when either side is entirely tied.
double kendall_tau(std::span<const double> xs, std::span<const double> ys);

struct CorrelationCell {
  /// Absent when fewer than two anonymizers are usable or a side is all tied.
  std::optional<double> tau;
  /// Anonymizers with both a metric aggregate and a task utility.
  std::size_t n_models = 0;

  bool operator==(const CorrelationCell&) const = default;
};

struct CorrelationTable {
  std::vector<std::string> tasks;
  std::vector<std::string> metrics;
  /// cells[task][metric].
  std::vector<std::vector<CorrelationCell>> cells;
  /// Mean of the present cells of each metric column.
  std::vector<std::optional<double>> average;
  /// Anonymizers considered.
  std::size_t n_models = 0;
};

/// Empty lists select everything.
struct ReportFilter {
  std::vector<std::string> models;
  std::vector<std::string> tasks;
  std::vector<std::string> metrics;

  bool keeps_model(const std::string& name) const;
  bool keeps_task(const std::string& name) const;
  bool keeps_metric(const std::string& name) const;
};

/// For each (task, metric), correlates the anonymizers' primary metric
/// aggregates with their u_priv on the task. Only successful cells are used.
CorrelationTable build_correlation_table(const experiment::ExperimentResult& result,
                                         const ReportFilter& filter = {});

/// One point of a trade-off chart.
struct TradeoffPoint {
  std::string anonymizer;
  double privacy = 0;
  double delta = 0;
};

struct TradeoffChart {
  std::string task;
  std::string x_label;
  std::vector<TradeoffPoint> points;
};

/// Privacy score per anonymizer: the mean over successful privacy-task cells
/// of masked entity recall (de-identification) and 1 - accuracy
/// (authorship). Without privacy tasks, 1 - the first metric's primary
/// aggregate on the charted task is used instead.
std::vector<TradeoffChart> tradeoff_charts(const experiment::ExperimentResult& result,
                                           const ReportFilter& filter = {});

std::string render_tradeoff_svg(const TradeoffChart& chart);

/// Writes tasks.csv, correlation.csv, tradeoff_<task>.svg/.csv and, when at
/// least two models remain after filtering, compare_<a>_vs_<b>.csv for every
/// model pair.
void emit_report(const experiment::ExperimentResult& result,
                 const std::filesystem::path& out_dir, const ReportFilter& filter = {});

/// Writes compare_<a>_vs_<b>.csv. Throws ArgumentError for unknown models.
std::filesystem::path emit_comparison(const experiment::ExperimentResult& result,
                                      const std::string& a, const std::string& b,
                                      const std::filesystem::path& out_dir,
                                      const ReportFilter& filter = {});

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& value);

}  // namespace anonbench::analysis
