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

#include "anonbench/cli.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "anonbench/analysis.hpp"
#include "anonbench/corpus.hpp"
#include "anonbench/error.hpp"
#include "anonbench/experiment.hpp"
#include "anonbench/numfmt.hpp"

namespace anonbench::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Options {
  std::string config;
  std::string result;
  std::string out;
  std::vector<std::string> models;
  std::vector<std::string> tasks;
  std::vector<std::string> metrics;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_inflight;
  std::size_t count = 0;
  bool verbose = false;
};

analysis::ReportFilter filter_of(const Options& o) {
  return {o.models, o.tasks, o.metrics};
}

template <typename T, typename NameOf>
void select(std::vector<T>& items, const std::vector<std::string>& names, NameOf name_of,
            const char* what) {
  if (names.empty()) return;
  for (const auto& n : names) {
    if (std::none_of(items.begin(), items.end(), [&](const T& t) { return name_of(t) == n; })) {
      throw ArgumentError(std::string("unknown ") + what + " '" + n + "'");
    }
  }
  std::erase_if(items, [&](const T& t) {
    return std::find(names.begin(), names.end(), name_of(t)) == names.end();
  });
}

int cmd_run(const Options& o, std::ostream& out) {
  experiment::ExperimentConfig config = experiment::load_config(o.config);
  select(config.anonymizers, o.models, [](const auto& a) { return a.name; }, "model");
  select(config.tasks, o.tasks, [](const auto& t) { return t.name; }, "task");
  select(config.metrics, o.metrics, [](const std::string& m) { return m; }, "metric");
  if (o.seed) experiment::apply_seed_override(config, *o.seed);
  if (o.max_inflight) {
    if (*o.max_inflight < 1) throw ArgumentError("--max-inflight must be positive");
    for (auto& a : config.anonymizers) {
      if (a.endpoint) a.endpoint->max_in_flight = *o.max_inflight;
    }
  }
  if (!o.out.empty()) config.output_dir = o.out;
  if (config.output_dir.empty()) config.output_dir = "anonbench-out";
  experiment::validate(config);

  const experiment::RunOutcome outcome = experiment::run_experiment(config);
  const auto& r = outcome.result;
  std::size_t failed = 0;
  for (const auto& c : r.task_cells) failed += c.status == experiment::CellStatus::kError;
  for (const auto& c : r.metric_cells) failed += c.status == experiment::CellStatus::kError;
  out << "wrote " << (config.output_dir / "results.json").string() << "\n";
  out << r.task_cells.size() << " task cells, " << r.metric_cells.size() << " metric cells, "
      << failed << " failed; " << outcome.stats.anonymizer_invocations
      << " anonymizer calls, " << outcome.stats.cache_hits << " cache hits\n";
  for (const auto& c : r.task_cells) {
    if (c.error) out << "error " << c.anonymizer << "/" << c.task << ": " << *c.error << "\n";
  }
  return r.has_failures() ? kExitPartial : kExitOk;
}

void print_correlation(const analysis::CorrelationTable& t, std::ostream& out) {
  out << "task";
  for (const auto& m : t.metrics) out << "\t" << m;
  out << "\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? format_shortest(std::round(*v * 1e4) / 1e4) : std::string("-");
  };
  for (std::size_t i = 0; i < t.tasks.size(); ++i) {
    out << t.tasks[i];
    for (const auto& c : t.cells[i]) out << "\t" << cell(c.tau);
    out << "\n";
  }
  out << "Average";
  for (const auto& v : t.average) out << "\t" << cell(v);
  out << "\n";
}

int cmd_report(const Options& o, std::ostream& out) {
  const auto result = experiment::deserialize_result(o.result);
  const fs::path dir = o.out.empty() ? fs::path(o.result).parent_path() / "report" : fs::path(o.out);
  const auto filter = filter_of(o);
  analysis::emit_report(result, dir, filter);
  print_correlation(analysis::build_correlation_table(result, filter), out);
  out << "report written to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  if (o.models.size() != 2) throw ArgumentError("compare needs exactly two --models");
  const auto result = experiment::deserialize_result(o.result);
  const fs::path dir = o.out.empty() ? fs::path(o.result).parent_path() / "report" : fs::path(o.out);
  fs::create_directories(dir);
  const fs::path path =
      analysis::emit_comparison(result, o.models[0], o.models[1], dir, filter_of(o));
  std::ifstream in(path);
  out << in.rdbuf();
  return kExitOk;
}

int cmd_inspect(const Options& o, std::ostream& out) {
  if (o.models.size() != 1 || o.tasks.size() != 1) {
    throw ArgumentError("inspect needs one --models and one --tasks value");
  }
  const fs::path result_path(o.result);
  const auto result = experiment::deserialize_result(result_path);
  if (!result.find_task_cell(o.models[0], o.tasks[0])) {
    throw ArgumentError("no cell " + o.models[0] + "/" + o.tasks[0] + " in " + o.result);
  }
  const fs::path samples =
      experiment::sample_path(result_path.parent_path(), o.models[0], o.tasks[0]);
  std::ifstream in(samples);
  if (!in) throw Error("no stored samples at " + samples.string());
  std::string line;
  std::size_t shown = 0;
  while (std::getline(in, line) && (o.count == 0 || shown < o.count)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    out << "[" << j.at("id").get<std::string>() << "]\n";
    out << "  original:   " << j.at("original").get<std::string>() << "\n";
    out << "  anonymized: " << j.at("anonymized").get<std::string>() << "\n";
    if (j.contains("anonymized2")) {
      out << "  original2:   " << j.at("original2").get<std::string>() << "\n";
      out << "  anonymized2: " << j.at("anonymized2").get<std::string>() << "\n";
    }
    ++shown;
  }
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const std::size_t n = o.count == 0 ? 500 : o.count;
  const corpus::Dataset d = corpus::synth_pii_corpus(o.seed.value_or(0), n);
  const fs::path path = o.out;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  corpus::write_dataset(d, path);
  out << "wrote " << n << " records to " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark text anonymizers on privacy and task utility.", "anonbench"};
  app.require_subcommand(1);
  Options o;

  auto filters = [&o](CLI::App* sub) {
    sub->add_option("--models", o.models, "Anonymizers to include")->delimiter(',');
    sub->add_option("--tasks", o.tasks, "Tasks to include")->delimiter(',');
    sub->add_option("--metrics", o.metrics, "Metrics to include")->delimiter(',');
  };
  auto verbosity = [&o](CLI::App* sub) {
    sub->add_flag("-v,--verbose", o.verbose, "Log progress");
  };

  CLI::App* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", o.config, "Experiment config (JSON)")->required();
  run->add_option("--out", o.out, "Output directory (overrides the config)");
  filters(run);
  run->add_option("--seed", o.seed, "Override every seed");
  run->add_option("--max-inflight", o.max_inflight, "Concurrent requests per external endpoint");
  verbosity(run);

  CLI::App* report = app.add_subcommand("report", "Write tables and charts for a result file");
  report->add_option("--result", o.result, "Result file")->required();
  report->add_option("--out", o.out, "Report directory");
  filters(report);
  verbosity(report);

  CLI::App* compare = app.add_subcommand("compare", "Compare two anonymizers");
  compare->add_option("--result", o.result, "Result file")->required();
  compare->add_option("--out", o.out, "Report directory");
  filters(compare);
  verbosity(compare);

  CLI::App* inspect = app.add_subcommand("inspect", "Print stored anonymized samples");
  inspect->add_option("--result", o.result, "Result file")->required();
  filters(inspect);
  inspect->add_option("--count", o.count, "Samples to print (0 = all)");
  verbosity(inspect);

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic PII corpus");
  synth->add_option("--out", o.out, "Dataset file (JSON lines)")->required();
  synth->add_option("--count", o.count, "Number of records (default 500)");
  synth->add_option("--seed", o.seed, "Generator seed");
  verbosity(synth);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitFatal;
  }

  spdlog::set_level(o.verbose ? spdlog::level::info : spdlog::level::warn);
  try {
    if (run->parsed()) return cmd_run(o, out);
    if (report->parsed()) return cmd_report(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    if (inspect->parsed()) return cmd_inspect(o, out);
    return cmd_synth(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
}

}  // namespace anonbench::cli
