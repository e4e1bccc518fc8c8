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

// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "anonbench/analysis.hpp"
#include "anonbench/cli.hpp"
#include "anonbench/error.hpp"
#include "anonbench/experiment.hpp"
#include "anonbench/metrics.hpp"
#include "anonbench/synth.hpp"
#include "anonbench/tasks.hpp"
#include "support/plugins.hpp"
#include "support/stub_server.hpp"
#include "support/temp_dir.hpp"

namespace anonbench::acceptance {
namespace {

using anonymize::AnonymizerSpec;
using anonymize::Strategy;
using experiment::CellStatus;
using experiment::ExperimentConfig;
using experiment::ExperimentResult;
using json = nlohmann::json;
namespace fs = std::filesystem;

class Checker {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 10) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& line) { notes_.push_back(line); }
  bool passed() const { return failed_ == 0; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::size_t failed() const { return failed_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t failed_ = 0;
};

std::string str(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string seconds(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << v << " s";
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::shared_ptr<const corpus::Dataset> share(corpus::Dataset d) {
  return std::make_shared<const corpus::Dataset>(std::move(d));
}

tasks::TaskSpec classification(std::string name, corpus::SynthTask t) {
  tasks::TaskSpec spec;
  spec.name = std::move(name);
  spec.kind = tasks::TaskKind::kClassification;
  spec.train = share(std::move(t.train));
  spec.test = share(std::move(t.test));
  return spec;
}

std::vector<AnonymizerSpec> five_strategies() {
  std::vector<AnonymizerSpec> out;
  for (Strategy s : anonymize::all_strategies()) out.push_back(AnonymizerSpec::with_strategy(s, 3));
  return out;
}

// ---------------------------------------------------------------------------
// 1. Identity invariants

void identity_invariants(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  testing::register_length_task_plugin();
  const auto pii = share(corpus::synth_pii_corpus(101, 500));

  tasks::TaskSpec deid;
  deid.name = "deid";
  deid.kind = tasks::TaskKind::kDeidentification;
  deid.test = pii;

  tasks::TaskSpec authorship;
  auto a = corpus::synth_authorship_task(102, 10, 20, 50);
  authorship.name = "authorship";
  authorship.kind = tasks::TaskKind::kAuthorship;
  authorship.train = share(std::move(a.train));
  authorship.test = share(std::move(a.test));

  tasks::TaskSpec custom;
  custom.name = "length";
  custom.kind = tasks::TaskKind::kCustom;
  custom.plugin = "length_task";
  custom.test = pii;

  ExperimentConfig config;
  config.exp_name = "identity";
  config.anonymizers = {AnonymizerSpec::identity()};
  config.tasks = {classification("category", corpus::synth_category_task(103, 500, 500)), deid,
                  authorship, custom};
  config.metrics = {"rouge1", "rouge2", "rougeL"};
  const ExperimentResult r = experiment::run_experiment(config).result;

  c.check(r.task_cells.size() == 4, "expected 4 task cells");
  for (const auto& cell : r.task_cells) {
    c.check(cell.status == CellStatus::kOk && cell.result.has_value(),
            cell.task + ": cell failed: " + cell.error.value_or(""));
    if (cell.result) {
      c.check(cell.result->delta == 0.0, cell.task + ": delta " + str(cell.result->delta));
      c.check(cell.result->n_test == 500, cell.task + ": n_test " +
                                              std::to_string(cell.result->n_test));
    }
  }
  c.check(r.metric_cells.size() == 12, "expected 12 metric cells");
  for (const auto& cell : r.metric_cells) {
    const auto f1 = cell.primary();
    c.check(cell.primary_key == "f1" && f1 && *f1 == 1.0,
            cell.task + "/" + cell.metric + ": f1 " + (f1 ? str(*f1) : "absent"));
  }
  const double elapsed = seconds_since(start);
  c.check(elapsed < 60.0, "runtime " + str(elapsed) + " s exceeds 60 s");
  c.note("4 task kinds x 500 test records, rouge1/rouge2/rougeL f1 all 1.0");
}

// ---------------------------------------------------------------------------
// 2. Metric oracles

// All token sequences over {a, b, c} of length <= 8, shortest first. The id
// of a sequence is offset[len] + sum(s_i * 3^i).
struct SequenceSpace {
  static constexpr int kMaxLen = 8;
  std::vector<std::vector<std::uint8_t>> seqs;
  std::vector<std::string> texts;
  std::vector<std::vector<std::string>> tokens;
  std::array<std::size_t, kMaxLen + 2> offset{};
  std::array<std::size_t, kMaxLen + 1> pow3{};
  // deletions[id * kMaxLen + k]: id of the sequence without element k.
  std::vector<std::uint32_t> deletions;

  SequenceSpace() {
    pow3[0] = 1;
    for (int i = 1; i <= kMaxLen; ++i) pow3[i] = pow3[i - 1] * 3;
    for (int len = 0; len <= kMaxLen; ++len) {
      offset[len] = seqs.size();
      for (std::size_t code = 0; code < pow3[len]; ++code) {
        std::vector<std::uint8_t> s(len);
        std::size_t v = code;
        for (int i = 0; i < len; ++i, v /= 3) s[i] = static_cast<std::uint8_t>(v % 3);
        std::string text;
        std::vector<std::string> toks;
        for (int i = 0; i < len; ++i) {
          if (i > 0) text += ' ';
          text += static_cast<char>('a' + s[i]);
          toks.emplace_back(1, static_cast<char>('a' + s[i]));
        }
        seqs.push_back(std::move(s));
        texts.push_back(std::move(text));
        tokens.push_back(std::move(toks));
      }
    }
    offset[kMaxLen + 1] = seqs.size();
    deletions.assign(seqs.size() * kMaxLen, 0);
    for (std::size_t id = 0; id < seqs.size(); ++id) {
      const auto& s = seqs[id];
      for (std::size_t k = 0; k < s.size(); ++k) {
        std::vector<std::uint8_t> shorter = s;
        shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(k));
        deletions[id * kMaxLen + k] = static_cast<std::uint32_t>(id_of(shorter));
      }
    }
  }

  std::size_t id_of(const std::vector<std::uint8_t>& s) const {
    std::size_t code = 0;
    for (std::size_t i = 0; i < s.size(); ++i) code += s[i] * pow3[i];
    return offset[s.size()] + code;
  }
};

// Longest common subsequence by definition: the longest sequence that is a
// subsequence of both. For a fixed x, every subsequence of x is marked; then
// best[y] is |y| if y is marked and otherwise the best over y's one-element
// deletions, which enumerates all subsequences of y.
void lcs_oracle_row(const SequenceSpace& space, std::size_t x, std::vector<std::uint32_t>& mark,
                    std::uint32_t stamp, std::vector<std::uint8_t>& best) {
  const auto& xs = space.seqs[x];
  const std::size_t n = xs.size();
  std::vector<std::uint8_t> sub;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    sub.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) sub.push_back(xs[i]);
    }
    mark[space.id_of(sub)] = stamp;
  }
  for (std::size_t y = 0; y < space.seqs.size(); ++y) {
    const std::size_t len = space.seqs[y].size();
    if (mark[y] == stamp) {
      best[y] = static_cast<std::uint8_t>(len);
      continue;
    }
    std::uint8_t b = 0;
    for (std::size_t k = 0; k < len; ++k) {
      b = std::max(b, best[space.deletions[y * SequenceSpace::kMaxLen + k]]);
    }
    best[y] = b;
  }
}

void check_rouge_l_exhaustive(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  const SequenceSpace space;
  const std::size_t total = space.seqs.size();
  std::vector<std::uint32_t> mark(total, 0);
  std::vector<std::uint8_t> best(total, 0);
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  for (std::size_t x = 0; x < total; ++x) {
    lcs_oracle_row(space, x, mark, static_cast<std::uint32_t>(x + 1), best);
    const double ref_len = static_cast<double>(space.seqs[x].size());
    for (std::size_t y = 0; y < total; ++y) {
      const double cand_len = static_cast<double>(space.seqs[y].size());
      const double lcs = best[y];
      double p, r, f;
      if (ref_len == 0 && cand_len == 0) {
        p = r = f = 1.0;
      } else if (ref_len == 0 || cand_len == 0) {
        p = r = f = 0.0;
      } else {
        p = lcs / cand_len;
        r = lcs / ref_len;
        f = lcs == 0 ? 0.0 : 2 * p * r / (p + r);
      }
      // candidate = y, reference = x.
      const metrics::ScoreMap got = metrics::rouge_l(space.texts[y], space.texts[x]);
      const bool ok = std::abs(got.at("precision") - p) <= 1e-12 &&
                      std::abs(got.at("recall") - r) <= 1e-12 &&
                      std::abs(got.at("f1") - f) <= 1e-12 &&
                      metrics::lcs_length(space.tokens[y], space.tokens[x]) == best[y];
      if (!ok) {
        ++mismatches;
        c.check(false, "rouge_l mismatch for cand '" + space.texts[y] + "' ref '" +
                           space.texts[x] + "': oracle lcs " + std::to_string(best[y]));
      }
      ++pairs;
    }
  }
  c.check(pairs == total * total, "pair count");
  c.note("rouge_l: " + std::to_string(pairs) + " ordered pairs of " + std::to_string(total) +
         " sequences, " + std::to_string(mismatches) + " mismatches, " +
         seconds(seconds_since(start)));
}

void check_meteor(Checker& c) {
  const double same = metrics::meteor("the cat sat", "the cat sat");
  c.check(std::abs(same - (1.0 - 0.5 * std::pow(1.0 / 3.0, 3))) <= 1e-9,
          "meteor identical: " + str(same));
  const double disjoint = metrics::meteor("a quick fox", "slow brown dogs");
  c.check(std::abs(disjoint) <= 1e-9, "meteor disjoint: " + str(disjoint));
  const double swapped = metrics::meteor("the cat", "cat the");
  c.check(std::abs(swapped - 0.5) <= 1e-9, "meteor swapped: " + str(swapped));
  c.note("meteor: 3 closed-form examples within 1e-9");
}

double tau_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      tied_x += dx == 0;
      tied_y += dy == 0;
      if (dx != 0 && dy != 0) ((dx > 0) == (dy > 0) ? concordant : discordant) += 1;
    }
  }
  const long long n0 = static_cast<long long>(n * (n - 1) / 2);
  const double denominator =
      std::sqrt(static_cast<double>(n0 - tied_x) * static_cast<double>(n0 - tied_y));
  if (denominator == 0) return NAN;
  return static_cast<double>(concordant - discordant) / denominator;
}

void check_kendall(Checker& c) {
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 7; ++n) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= 3;
    std::vector<std::vector<double>> seqs(count, std::vector<double>(n));
    for (std::size_t code = 0; code < count; ++code) {
      std::size_t v = code;
      for (std::size_t i = 0; i < n; ++i, v /= 3) seqs[code][i] = static_cast<double>(1 + v % 3);
    }
    for (const auto& x : seqs) {
      for (const auto& y : seqs) {
        const double expected = tau_oracle(x, y);
        ++checked;
        if (std::isnan(expected)) {
          bool threw = false;
          try {
            analysis::kendall_tau(x, y);
          } catch (const DegenerateInputError&) {
            threw = true;
          }
          c.check(threw, "kendall_tau: degenerate input did not throw");
        } else {
          c.check(analysis::kendall_tau(x, y) == expected, "kendall_tau differs from oracle");
        }
      }
    }
  }
  c.note("kendall_tau: " + std::to_string(checked) + " pairs of length 2..7 over {1,2,3}");
}

void metric_oracles(Checker& c) {
  check_meteor(c);
  check_kendall(c);
  check_rouge_l_exhaustive(c);
}

// ---------------------------------------------------------------------------
// 3. Privacy recall

void privacy_recall(Checker& c) {
  tasks::TaskSpec deid;
  deid.name = "deid";
  deid.kind = tasks::TaskKind::kDeidentification;
  deid.test = share(corpus::synth_pii_corpus(301, 500));
  const auto uniform = tasks::run_privacy_task(
      deid, AnonymizerSpec::with_strategy(Strategy::kUniformPlaceholder));
  const auto identity = tasks::run_privacy_task(deid, AnonymizerSpec::identity());
  c.check(uniform.u_priv == 1.0, "uniform_placeholder recall " + str(uniform.u_priv));
  c.check(identity.u_priv == 0.0, "identity recall " + str(identity.u_priv));
  c.note("masked entity recall on 500 records: uniform_placeholder " + str(uniform.u_priv) +
         ", identity " + str(identity.u_priv));
}

// ---------------------------------------------------------------------------
// 4. Task-sensitivity ordering

void sensitivity_ordering(Checker& c) {
  tasks::RunOptions options;
  options.classifier_seed = 401;

  const tasks::TaskSpec category =
      classification("category", corpus::synth_category_task(402, 500, 500));
  const auto category_model = tasks::train_classifier(*category.train, category, 401);
  auto delta_on = [&](const tasks::TaskSpec& task, const tasks::ClassifierModel& model,
                      Strategy s) {
    const auto spec = AnonymizerSpec::with_strategy(s, 7);
    return tasks::run_task(task, spec.name, tasks::direct_split_anonymizer(spec), options,
                           &model);
  };
  const auto deletion = delta_on(category, category_model, Strategy::kEntityDeletion);
  const auto tags = delta_on(category, category_model, Strategy::kCategoryPlaceholder);
  c.check(deletion.n_test == 500, "category n_test");
  c.check(deletion.delta - tags.delta >= 0.2,
          "delta(entity_deletion) " + str(deletion.delta) + " vs delta(category_placeholder) " +
              str(tags.delta));
  c.note("entity-label task: delta(entity_deletion) = " + str(deletion.delta) +
         ", delta(category_placeholder) = " + str(tags.delta));

  const tasks::TaskSpec topic = classification("topic", corpus::synth_topic_task(403, 500, 500));
  const auto topic_model = tasks::train_classifier(*topic.train, topic, 401);
  std::string deltas;
  for (Strategy s : anonymize::all_strategies()) {
    const auto r = delta_on(topic, topic_model, s);
    c.check(std::abs(r.delta) <= 0.05,
            "entity-independent task: |delta| " + str(r.delta) + " for " +
                std::string(anonymize::to_string(s)));
    deltas += " " + std::string(anonymize::to_string(s)) + "=" + str(r.delta);
  }
  c.note("entity-independent task deltas:" + deltas);
}

// ---------------------------------------------------------------------------
// 5. Random baseline

void random_baseline(Checker& c) {
  const std::vector<std::vector<std::size_t>> distributions = {
      {600, 300, 100}, {50, 50}, {900, 100}, {1, 2, 3, 4, 5, 6, 7}};
  for (const auto& counts : distributions) {
    std::vector<std::string> labels;
    double n = 0;
    double expected = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      for (std::size_t i = 0; i < counts[k]; ++i) labels.push_back("c" + std::to_string(k));
      n += static_cast<double>(counts[k]);
    }
    for (std::size_t count : counts) expected += (count / n) * (count / n);
    const double analytic = tasks::random_baseline(labels, tasks::TaskMetric::kAccuracy, 5);
    const double simulated = tasks::simulate_random_accuracy(labels, 5, 100000);
    c.check(std::abs(analytic - expected) <= 1e-12, "analytic " + str(analytic));
    c.check(std::abs(analytic - simulated) <= 0.01,
            "analytic " + str(analytic) + " vs simulated " + str(simulated));
    c.note("sum p^2 = " + str(analytic) + ", simulated " + str(simulated));
  }
  const std::vector<std::string> two = {"a", "b", "a", "b"};
  const std::vector<std::string> three = {"x", "y", "z", "z", "y", "x"};
  const double b2 = tasks::random_baseline(two, tasks::TaskMetric::kAccuracy, 0);
  const double b3 = tasks::random_baseline(three, tasks::TaskMetric::kAccuracy, 0);
  c.check(b2 == 0.5, "balanced 2-class " + str(b2));
  c.check(b3 == 1.0 / 3.0, "balanced 3-class " + str(b3));
}

// ---------------------------------------------------------------------------
// 6 and 7 share one configuration: 5 strategies x 3 tasks x 4 metrics.

ExperimentConfig grid_config() {
  testing::register_length_task_plugin();
  ExperimentConfig config;
  config.exp_name = "grid";
  config.anonymizers = five_strategies();
  tasks::TaskSpec length;
  length.name = "length";
  length.kind = tasks::TaskKind::kCustom;
  length.plugin = "length_task";
  length.test = share(corpus::synth_pii_corpus(601, 300));
  config.tasks = {classification("category", corpus::synth_category_task(602, 500, 500)),
                  classification("category_untagged",
                                 corpus::synth_category_task(603, 300, 300, 0.0)),
                  length};
  config.metrics = {"rouge1", "meteor", "embed_sim", "referenceless"};
  config.classifier_seed = 604;
  config.sample_store_count = 10;
  return config;
}

std::string strip_timestamps(const std::string& text) {
  const std::string key = "\"timestamps\": {";
  const std::size_t start = text.find(key);
  if (start == std::string::npos) return text;
  const std::size_t end = text.find('}', start);
  return text.substr(0, start) + text.substr(end + 1);
}

class CountingAnonymizer final : public anonymize::Anonymizer {
 public:
  CountingAnonymizer(std::unique_ptr<anonymize::Anonymizer> inner, std::atomic<int>* calls)
      : inner_(std::move(inner)), calls_(calls) {}
  const std::string& name() const override { return inner_->name(); }
  std::string anonymize(std::string_view text) override {
    ++*calls_;
    return inner_->anonymize(text);
  }

 private:
  std::unique_ptr<anonymize::Anonymizer> inner_;
  std::atomic<int>* calls_;
};

std::optional<ExperimentResult> g_grid_result;

void determinism_and_cache(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  testing::TempDir dir;
  std::atomic<int> calls{0};
  experiment::RunHooks hooks;
  hooks.anonymizer_factory = [&calls](const AnonymizerSpec& spec) {
    return std::make_unique<CountingAnonymizer>(anonymize::make_anonymizer(spec), &calls);
  };

  ExperimentConfig first = grid_config();
  first.cache_dir = dir / "cache_a";
  first.output_dir = dir / "run_a";
  const auto cold_a = experiment::run_experiment(first, hooks);
  const int cold_calls = calls.exchange(0);

  ExperimentConfig second = grid_config();
  second.cache_dir = dir / "cache_b";
  second.output_dir = dir / "run_b";
  experiment::run_experiment(second, hooks);
  calls = 0;

  ExperimentConfig warm = grid_config();
  warm.cache_dir = dir / "cache_a";
  warm.output_dir = dir / "run_warm";
  const auto warm_run = experiment::run_experiment(warm, hooks);

  const std::string a = testing::read_file(dir / "run_a" / "results.json");
  const std::string b = testing::read_file(dir / "run_b" / "results.json");
  const std::string w = testing::read_file(dir / "run_warm" / "results.json");
  c.check(!cold_a.result.has_failures(), "cold run had failing cells");
  c.check(cold_calls > 0, "cold run made no anonymizer calls");
  c.check(a != b, "timestamp blocks unexpectedly equal, comparison would be vacuous");
  c.check(strip_timestamps(a) == strip_timestamps(b),
          "cold runs differ outside the timestamp block");
  c.check(calls.load() == 0, "warm rerun made " + std::to_string(calls.load()) + " calls");
  c.check(warm_run.stats.anonymizer_invocations == 0, "warm rerun invocation counter");
  c.check(strip_timestamps(w) == strip_timestamps(a), "warm rerun content differs");
  const double elapsed = seconds_since(start);
  c.check(elapsed < 300.0, "runtime " + str(elapsed) + " s exceeds 300 s");
  c.note("cold runs: " + std::to_string(cold_calls) + " anonymizer calls each; warm rerun: " +
         std::to_string(calls.load()) + " calls, " +
         std::to_string(warm_run.stats.cache_hits) + " cache hits; " +
         seconds(elapsed));
  g_grid_result = cold_a.result;
}

// ---------------------------------------------------------------------------
// 7. Correlation pipeline shape

void correlation_shape(Checker& c) {
  if (!g_grid_result) g_grid_result = experiment::run_experiment(grid_config()).result;
  const ExperimentResult& r = *g_grid_result;
  c.check(r.anonymizer_names().size() == 5, "expected 5 anonymizers");
  const analysis::CorrelationTable t = analysis::build_correlation_table(r);
  c.check(t.tasks.size() == 3 && t.cells.size() == 3, "expected 3 task rows");
  c.check(t.metrics.size() == 4, "expected 4 metric columns");
  c.check(t.average.size() == t.metrics.size(), "Average row width");
  for (std::size_t m = 0; m < t.metrics.size(); ++m) {
    double sum = 0;
    std::size_t present = 0;
    for (std::size_t row = 0; row < t.cells.size(); ++row) {
      const auto& cell = t.cells[row][m];
      c.check(cell.tau.has_value(), t.tasks[row] + "/" + t.metrics[m] + ": cell absent");
      c.check(cell.n_models == 5, t.tasks[row] + "/" + t.metrics[m] + ": n_models " +
                                      std::to_string(cell.n_models));
      if (cell.tau) {
        c.check(*cell.tau >= -1.0 && *cell.tau <= 1.0, "tau out of range");
        sum += *cell.tau;
        ++present;
      }
    }
    if (present > 0 && t.average[m]) {
      c.check(std::abs(*t.average[m] - sum / static_cast<double>(present)) <= 1e-12,
              t.metrics[m] + ": Average differs from column mean");
    } else {
      c.check(false, t.metrics[m] + ": Average absent");
    }
  }
  std::ostringstream grid;
  for (std::size_t row = 0; row < t.tasks.size(); ++row) {
    grid << t.tasks[row] << ":";
    for (const auto& cell : t.cells[row]) grid << " " << (cell.tau ? str(*cell.tau) : "-");
    grid << "; ";
  }
  c.note("3 x 4 taus plus Average: " + grid.str());
}

// ---------------------------------------------------------------------------
// 8. External adapter

void external_adapter(Checker& c) {
  // Prompts are sent verbatim.
  testing::StubChatServer echo([](const std::string& prompt, int) {
    return testing::StubChatServer::ok("ANON: " + std::to_string(prompt.size()));
  });
  anonymize::EndpointConfig endpoint;
  endpoint.base_url = echo.base_url();
  endpoint.model = "stub-model";
  endpoint.backoff_initial_ms = 1;
  const std::string record = "Maria Silva emailed maria.silva@example.com from Lisbon.";
  std::size_t sent = 0;
  for (const std::string builtin : {"builtin:pii_redaction", "builtin:authorship_obfuscation"}) {
    const std::string tmpl = anonymize::resolve_prompt_template(builtin);
    const std::size_t slot = tmpl.find("{text}");
    c.check(slot != std::string::npos, builtin + " lacks {text}");
    if (slot == std::string::npos) continue;
    const std::string reply = anonymize::external_anonymize(endpoint, tmpl, record);
    const std::string prompt = echo.prompts().back();
    ++sent;
    c.check(prompt == tmpl.substr(0, slot) + record + tmpl.substr(slot + 6),
            builtin + ": prompt is not the template with the record substituted");
    c.check(prompt.find(tmpl.substr(0, slot)) == 0, builtin + ": template text missing");
    c.check(prompt.find(record) != std::string::npos, builtin + ": record text missing");
    c.check(reply == "ANON: " + std::to_string(prompt.size()), builtin + ": reply " + reply);
  }
  c.check(echo.requests() == static_cast<int>(sent), "one request per prompt");

  // Transient failures are retried max_retries times.
  for (int retries : {2, 1, 0}) {
    testing::StubChatServer flaky([](const std::string&, int request) {
      return request < 2 ? testing::StubChatServer::Reply{503, "busy"}
                         : testing::StubChatServer::ok("done");
    });
    anonymize::EndpointConfig e = endpoint;
    e.base_url = flaky.base_url();
    e.max_retries = retries;
    bool succeeded = false;
    try {
      succeeded = anonymize::external_anonymize(e, "{text}", "x") == "done";
    } catch (const TransportError&) {
    }
    const int expected_requests = std::min(retries + 1, 3);
    c.check(succeeded == (retries >= 2), "max_retries " + std::to_string(retries) +
                                             ": unexpected outcome");
    c.check(flaky.requests() == expected_requests,
            "max_retries " + std::to_string(retries) + ": " + std::to_string(flaky.requests()) +
                " requests, expected " + std::to_string(expected_requests));
  }

  // A downed endpoint fails its cells only; the CLI exits 2.
  testing::TempDir dir;
  const json config = {
      {"exp_name", "downed"},
      {"anonymizers",
       {{{"name", "identity"}},
        {{"name", "uniform"}, {"strategy", "uniform_placeholder"}},
        {{"name", "llm"},
         {"kind", "external"},
         {"prompt_template", "builtin:pii_redaction"},
         {"endpoint",
          {{"base_url", "http://127.0.0.1:" + std::to_string(testing::unused_local_port()) + "/v1"},
           {"model", "stub-model"},
           {"max_retries", 2},
           {"backoff_initial_ms", 1},
           {"timeout_seconds", 5}}}}}},
      {"tasks",
       {{{"name", "category"},
         {"kind", "classification"},
         {"synthetic", {{"generator", "category"}, {"n_train", 100}, {"n_test", 50}}}},
        {{"name", "pii"}, {"kind", "deidentification"}, {"synthetic", {{"generator", "pii"}, {"n", 50}}}}}},
      {"metrics", {"rouge1"}},
      {"output_dir", "out"}};
  testing::write_file(dir / "exp.json", config.dump(2));
  std::ostringstream out, err;
  const int status = cli::run_cli({"run", "--config", (dir / "exp.json").string()}, out, err);
  c.check(status == cli::kExitPartial, "exit status " + std::to_string(status) + ": " + err.str());
  const auto result = experiment::deserialize_result(dir / "out" / "results.json");
  c.check(result.task_cells.size() == 6 && result.metric_cells.size() == 6, "cell counts");
  for (const auto& cell : result.task_cells) {
    if (cell.anonymizer == "llm") {
      c.check(cell.status == CellStatus::kError && cell.error, "llm cell not marked as error");
    } else {
      c.check(cell.status == CellStatus::kOk && cell.result,
              cell.anonymizer + "/" + cell.task + " not populated");
    }
  }
  for (const auto& cell : result.metric_cells) {
    c.check((cell.anonymizer == "llm") == (cell.status == CellStatus::kError),
            cell.anonymizer + "/" + cell.task + " metric cell status");
  }
  c.note("templates sent verbatim; retries honored for max_retries 0/1/2; downed endpoint exit " +
         std::to_string(status));
}

struct Criterion {
  int id;
  std::string title;
  std::function<void(Checker&)> run;
};

}  // namespace
}  // namespace anonbench::acceptance

int main() {
  using namespace anonbench::acceptance;
  spdlog::set_level(spdlog::level::warn);
  const std::vector<Criterion> criteria = {
      {1, "identity invariants", identity_invariants},
      {2, "metric oracles", metric_oracles},
      {3, "privacy recall", privacy_recall},
      {4, "task-sensitivity ordering", sensitivity_ordering},
      {5, "random baseline", random_baseline},
      {6, "determinism and cache", determinism_and_cache},
      {7, "correlation pipeline shape", correlation_shape},
      {8, "external adapter", external_adapter},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.check(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    std::cout << (checker.passed() ? "PASS" : "FAIL") << "  criterion " << criterion.id << ": "
              << criterion.title << " (" << seconds(elapsed) << ")\n";
    for (const auto& note : checker.notes()) std::cout << "        " << note << "\n";
    for (const auto& f : checker.failures()) std::cout << "        failed: " << f << "\n";
    if (checker.failed() > checker.failures().size()) {
      std::cout << "        ... " << checker.failed() - checker.failures().size()
                << " more failed checks\n";
    }
    std::cout.flush();
    failed += !checker.passed();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
