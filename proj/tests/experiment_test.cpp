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

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>

#include "anonbench/error.hpp"
#include "anonbench/experiment.hpp"
#include "anonbench/synth.hpp"
#include "support/plugins.hpp"
#include "support/temp_dir.hpp"

namespace anonbench::experiment {
namespace {

using anonymize::AnonymizerSpec;
using anonymize::Strategy;
using json = nlohmann::json;
using testing::TempDir;

tasks::TaskSpec category_task(std::size_t n_train = 80, std::size_t n_test = 40) {
  auto t = corpus::synth_category_task(3, n_train, n_test);
  tasks::TaskSpec spec;
  spec.name = "category";
  spec.kind = tasks::TaskKind::kClassification;
  spec.train = std::make_shared<const corpus::Dataset>(std::move(t.train));
  spec.test = std::make_shared<const corpus::Dataset>(std::move(t.test));
  return spec;
}

tasks::TaskSpec deid_task(std::size_t n = 30) {
  tasks::TaskSpec spec;
  spec.name = "deid";
  spec.kind = tasks::TaskKind::kDeidentification;
  spec.test = std::make_shared<const corpus::Dataset>(corpus::synth_pii_corpus(5, n));
  return spec;
}

std::vector<AnonymizerSpec> five_strategies() {
  std::vector<AnonymizerSpec> out;
  for (Strategy s : anonymize::all_strategies()) {
    out.push_back(AnonymizerSpec::with_strategy(s, 7));
  }
  return out;
}

ExperimentResult without_timestamps(ExperimentResult r) {
  r.provenance.timestamps.clear();
  return r;
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

RunHooks counting_hooks(std::atomic<int>* calls) {
  RunHooks hooks;
  hooks.anonymizer_factory = [calls](const AnonymizerSpec& spec) {
    return std::make_unique<CountingAnonymizer>(anonymize::make_anonymizer(spec), calls);
  };
  return hooks;
}

class FailingAnonymizer final : public anonymize::Anonymizer {
 public:
  const std::string& name() const override { return name_; }
  std::string anonymize(std::string_view) override { throw TransportError("endpoint down"); }

 private:
  std::string name_ = "failing";
};

// ---------------------------------------------------------------------------
// Cache

TEST(CacheTest, LookupBeforeStoreIsAbsent) {
  TempDir dir;
  AnonymizationCache cache(dir.path());
  EXPECT_FALSE(cache.lookup(AnonymizerSpec::identity(), "fp", "r1"));
}

TEST(CacheTest, StoreThenLookupIsVerbatim) {
  TempDir dir;
  const auto spec = AnonymizerSpec::with_strategy(Strategy::kUniformPlaceholder);
  {
    AnonymizationCache cache(dir.path());
    cache.store(spec, "fp", "r1", "Hello [MASK], caf\xC3\xA9\n");
    EXPECT_EQ(*cache.lookup(spec, "fp", "r1"), "Hello [MASK], caf\xC3\xA9\n");
  }
  AnonymizationCache reopened(dir.path());
  EXPECT_EQ(*reopened.lookup(spec, "fp", "r1"), "Hello [MASK], caf\xC3\xA9\n");
  EXPECT_FALSE(reopened.lookup(spec, "fp", "r2"));
  EXPECT_FALSE(reopened.lookup(spec, "other", "r1"));
}

TEST(CacheTest, SpecsAreIsolated) {
  TempDir dir;
  AnonymizationCache cache(dir.path());
  auto a = AnonymizerSpec::with_strategy(Strategy::kFakerPlaceholder, 1);
  auto b = AnonymizerSpec::with_strategy(Strategy::kFakerPlaceholder, 2);
  cache.store(a, "fp", "r1", "from a");
  EXPECT_FALSE(cache.lookup(b, "fp", "r1"));
  cache.store(b, "fp", "r1", "from b");
  EXPECT_EQ(*cache.lookup(a, "fp", "r1"), "from a");
  EXPECT_EQ(*cache.lookup(b, "fp", "r1"), "from b");
  EXPECT_NE(AnonymizationCache::key(a, "fp"), AnonymizationCache::key(b, "fp"));
}

TEST(CacheTest, CorruptFileIsAMiss) {
  TempDir dir;
  const auto spec = AnonymizerSpec::identity();
  {
    AnonymizationCache cache(dir.path());
    cache.store(spec, "fp", "r1", "text");
  }
  testing::write_file(dir.path() / (AnonymizationCache::key(spec, "fp") + ".json"),
                      "{\"entries\": {\"r1\": ");
  AnonymizationCache cache(dir.path());
  EXPECT_FALSE(cache.lookup(spec, "fp", "r1"));
  cache.store(spec, "fp", "r1", "again");
  AnonymizationCache reopened(dir.path());
  EXPECT_EQ(*reopened.lookup(spec, "fp", "r1"), "again");
}

// ---------------------------------------------------------------------------
// Serialization

ExperimentResult populated_result() {
  ExperimentResult r;
  r.exp_name = "demo";
  r.config = {{"exp_name", "demo"}, {"metrics", {"rouge1"}}};
  r.task_cells.push_back({"a", "t", CellStatus::kOk,
                          tasks::make_task_result("t", "a", "accuracy", 0.75, 0.1 + 0.2, 40),
                          std::nullopt});
  r.task_cells.push_back({"b", "t", CellStatus::kError, std::nullopt, "endpoint down"});
  r.task_cells.push_back({"c", "t", CellStatus::kSkipped, std::nullopt, std::nullopt});
  MetricCell m;
  m.anonymizer = "a";
  m.task = "t";
  m.metric = "rouge1";
  m.primary_key = "f1";
  m.n_pairs = 40;
  m.aggregate = metrics::ScoreMap{{"f1", 1.0 / 3.0}, {"precision", 0.5}, {"recall", 1e-17}};
  r.metric_cells.push_back(m);
  r.random_baselines["t"] = 0.5;
  r.provenance.code_version = std::string(kCodeVersion);
  r.provenance.detector_version = "d1";
  r.provenance.dataset_fingerprints["t/test"] = "abc";
  r.provenance.anonymizer_specs["a"] = anonymize::to_json(AnonymizerSpec::identity("a"));
  r.provenance.anonymizer_hashes["a"] = "123";
  r.provenance.seeds["classifier_seed"] = 18446744073709551615ull;
  r.provenance.timestamps["started"] = "2026-01-01T00:00:00Z";
  r.cache_keys["a/t/test"] = "k";
  return r;
}

TEST(SerializationTest, RoundTripIsEqual) {
  TempDir dir;
  const ExperimentResult r = populated_result();
  serialize_result(r, dir / "r.json");
  EXPECT_EQ(deserialize_result(dir / "r.json"), r);
}

TEST(SerializationTest, SerializingTwiceIsByteIdentical) {
  TempDir dir;
  const ExperimentResult r = populated_result();
  serialize_result(r, dir / "a.json");
  serialize_result(deserialize_result(dir / "a.json"), dir / "b.json");
  const std::string a = testing::read_file(dir / "a.json");
  EXPECT_EQ(a, testing::read_file(dir / "b.json"));
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a.back(), '\n');
}

TEST(SerializationTest, KeysAreSorted) {
  const std::string text = serialize_result(populated_result());
  EXPECT_LT(text.find("\"cache_keys\""), text.find("\"config\""));
  EXPECT_LT(text.find("\"config\""), text.find("\"exp_name\""));
  EXPECT_LT(text.find("\"exp_name\""), text.find("\"metric_cells\""));
}

TEST(SerializationTest, MissingFieldNamesPath) {
  TempDir dir;
  json j = to_json(populated_result());
  j["task_cells"][0]["result"].erase("u_priv");
  testing::write_file(dir / "r.json", j.dump());
  try {
    deserialize_result(dir / "r.json");
    FAIL() << "expected DeserializationError";
  } catch (const DeserializationError& e) {
    EXPECT_EQ(e.path(), "task_cells[0].result.u_priv");
    EXPECT_NE(std::string(e.what()).find("u_priv"), std::string::npos);
  }
}

TEST(SerializationTest, WrongTypeNamesPath) {
  json j = to_json(populated_result());
  j["metric_cells"][0]["aggregate"]["f1"] = "high";
  try {
    result_from_json(j);
    FAIL() << "expected DeserializationError";
  } catch (const DeserializationError& e) {
    EXPECT_EQ(e.path(), "metric_cells[0].aggregate.f1");
  }
}

TEST(SerializationTest, UnreadableFileThrows) {
  TempDir dir;
  EXPECT_THROW(deserialize_result(dir / "missing.json"), DeserializationError);
  testing::write_file(dir / "bad.json", "not json");
  EXPECT_THROW(deserialize_result(dir / "bad.json"), DeserializationError);
}

// ---------------------------------------------------------------------------
// Config

TEST(ConfigTest, ParsesSyntheticTasksAndResolvesPaths) {
  const json j = {
      {"exp_name", "cfg"},
      {"anonymizers", {{{"name", "del"}, {"strategy", "entity_deletion"}}}},
      {"tasks",
       {{{"name", "cat"},
         {"kind", "classification"},
         {"synthetic", {{"generator", "category"}, {"seed", 1}, {"n_train", 20}, {"n_test", 10}}}},
        {{"name", "pii"}, {"kind", "deidentification"}, {"synthetic", {{"generator", "pii"}, {"n", 12}}}}}},
      {"metrics", {"rouge1", "meteor"}},
      {"classifier_seed", 9},
      {"cache_dir", "cache"},
      {"output_dir", "/abs/out"},
  };
  const ExperimentConfig c = config_from_json(j, "/base");
  EXPECT_EQ(c.exp_name, "cfg");
  ASSERT_EQ(c.anonymizers.size(), 1u);
  EXPECT_EQ(c.anonymizers[0].strategy, Strategy::kEntityDeletion);
  ASSERT_EQ(c.tasks.size(), 2u);
  EXPECT_EQ(c.tasks[0].train->size(), 20u);
  EXPECT_EQ(c.tasks[1].test->size(), 12u);
  EXPECT_EQ(c.classifier_seed, 9u);
  EXPECT_EQ(c.cache_dir, std::filesystem::path("/base/cache"));
  EXPECT_EQ(c.output_dir, std::filesystem::path("/abs/out"));
  EXPECT_EQ(c.sample_store_count, 20u);
}

TEST(ConfigTest, LoadsDatasetFilesRelativeToConfig) {
  TempDir dir;
  std::filesystem::create_directories(dir / "data");
  testing::write_file(dir / "data" / "test.jsonl",
                      "{\"id\": \"a\", \"text\": \"x\", \"label\": \"p\"}\n"
                      "{\"id\": \"b\", \"text\": \"y\", \"label\": \"q\"}\n");
  testing::write_file(dir / "exp.json",
                      json{{"exp_name", "files"},
                           {"tasks",
                            {{{"name", "t"},
                              {"kind", "classification"},
                              {"train", "data/test.jsonl"},
                              {"test", "data/test.jsonl"}}}}}
                          .dump());
  const ExperimentConfig c = load_config(dir / "exp.json");
  ASSERT_EQ(c.tasks.size(), 1u);
  EXPECT_EQ(c.tasks[0].test->size(), 2u);
  EXPECT_EQ(config_echo(c).dump().find(dir.path().string()), std::string::npos);
}

TEST(ConfigTest, RejectsInvalidConfigs) {
  const json task = {{"name", "pii"},
                     {"kind", "deidentification"},
                     {"synthetic", {{"generator", "pii"}, {"n", 5}}}};
  EXPECT_THROW(config_from_json({{"exp_name", "x"}, {"tasks", {task}}, {"bogus", 1}}, "."),
               ConfigError);
  EXPECT_THROW(config_from_json({{"exp_name", ""}, {"tasks", {task}}}, "."), ConfigError);
  EXPECT_THROW(config_from_json({{"exp_name", "x"}}, "."), ConfigError);
  EXPECT_THROW(config_from_json({{"exp_name", "x"}, {"metrics", {"bleu"}}}, "."), ConfigError);
  EXPECT_THROW(config_from_json({{"exp_name", "x"},
                                 {"tasks", {task}},
                                 {"anonymizers", {{{"name", "a"}}, {{"name", "a"}}}}},
                                "."),
               ConfigError);
  json unlabeled = task;
  unlabeled["kind"] = "classification";
  EXPECT_THROW(config_from_json({{"exp_name", "x"}, {"tasks", {unlabeled}}}, "."), ConfigError);
}

TEST(ConfigTest, SeedOverrideReachesEverySeed) {
  ExperimentConfig c;
  c.exp_name = "s";
  c.anonymizers = five_strategies();
  c.metrics = {"rouge1"};
  apply_seed_override(c, 42);
  EXPECT_EQ(c.classifier_seed, 42u);
  for (const auto& a : c.anonymizers) EXPECT_EQ(a.seed, 42u);
  EXPECT_EQ(config_echo(c).at("seed_override"), 42);
}

// ---------------------------------------------------------------------------
// Runs

TEST(RunTest, IdentityGivesZeroDeltaAndPerfectRouge) {
  ExperimentConfig c;
  c.exp_name = "identity";
  c.anonymizers = {AnonymizerSpec::identity()};
  c.tasks = {category_task()};
  c.metrics = {"rouge1"};
  const ExperimentResult r = run_experiment(c).result;
  ASSERT_EQ(r.task_cells.size(), 1u);
  ASSERT_TRUE(r.task_cells[0].result);
  EXPECT_EQ(r.task_cells[0].result->delta, 0.0);
  ASSERT_EQ(r.metric_cells.size(), 1u);
  EXPECT_EQ(r.metric_cells[0].primary(), 1.0);
  EXPECT_EQ(r.metric_cells[0].n_pairs, 40u);
  EXPECT_FALSE(r.has_failures());
  EXPECT_EQ(r.random_baselines.count("category"), 1u);
}

TEST(RunTest, FiveStrategiesTwoTasksGiveTenCells) {
  TempDir dir;
  ExperimentConfig c;
  c.exp_name = "listing";
  c.anonymizers = five_strategies();
  c.tasks = {category_task(), deid_task()};
  c.metrics = {"rougeL"};
  c.output_dir = dir / "out";
  c.sample_store_count = 3;
  const ExperimentResult r = run_experiment(c).result;
  EXPECT_EQ(r.task_cells.size(), 10u);
  EXPECT_EQ(r.metric_cells.size(), 10u);
  for (const auto& a : c.anonymizers) {
    for (const auto& t : c.tasks) {
      const TaskCell* cell = r.find_task_cell(a.name, t.name);
      ASSERT_NE(cell, nullptr);
      EXPECT_EQ(cell->status, CellStatus::kOk) << cell->error.value_or("");
      ASSERT_NE(r.find_metric_cell(a.name, t.name, "rougeL"), nullptr);
      const std::string samples = testing::read_file(sample_path(c.output_dir, a.name, t.name));
      EXPECT_EQ(std::count(samples.begin(), samples.end(), '\n'), 3);
    }
  }
  EXPECT_EQ(r.find_task_cell("uniform_placeholder", "deid")->result->u_priv, 1.0);
  EXPECT_EQ(deserialize_result(c.output_dir / "results.json"), r);
}

TEST(RunTest, WarmCacheRerunMakesNoCalls) {
  TempDir dir;
  ExperimentConfig c;
  c.exp_name = "cache";
  c.anonymizers = five_strategies();
  c.tasks = {category_task(60, 30), deid_task(20)};
  c.metrics = {"rouge1", "meteor"};
  c.cache_dir = dir / "cache";

  std::atomic<int> calls{0};
  const RunOutcome cold = run_experiment(c, counting_hooks(&calls));
  EXPECT_EQ(calls.load(), 5 * (30 + 20));
  EXPECT_EQ(cold.stats.anonymizer_invocations, 5u * (30 + 20));
  EXPECT_EQ(cold.stats.cache_hits, 0u);

  calls = 0;
  const RunOutcome warm = run_experiment(c, counting_hooks(&calls));
  EXPECT_EQ(calls.load(), 0);
  EXPECT_EQ(warm.stats.anonymizer_invocations, 0u);
  EXPECT_EQ(warm.stats.cache_hits, 5u * (30 + 20));
  EXPECT_EQ(serialize_result(without_timestamps(warm.result)),
            serialize_result(without_timestamps(cold.result)));
}

TEST(RunTest, ColdRunsAreDeterministic) {
  ExperimentConfig c;
  c.exp_name = "det";
  c.anonymizers = five_strategies();
  c.tasks = {category_task(60, 30), deid_task(20)};
  c.metrics = {"rouge2", "embed_sim", "referenceless"};
  const ExperimentResult a = run_experiment(c).result;
  c.max_concurrency = 3;
  const ExperimentResult b = run_experiment(c).result;
  EXPECT_EQ(serialize_result(without_timestamps(a)), serialize_result(without_timestamps(b)));
}

TEST(RunTest, FailingAnonymizerIsIsolated) {
  ExperimentConfig c;
  c.exp_name = "partial";
  c.anonymizers = {AnonymizerSpec::identity("ok"), AnonymizerSpec::identity("down")};
  c.tasks = {category_task(60, 30), deid_task(20)};
  c.metrics = {"rouge1"};
  RunHooks hooks;
  hooks.anonymizer_factory =
      [](const AnonymizerSpec& spec) -> std::unique_ptr<anonymize::Anonymizer> {
    if (spec.name == "down") return std::make_unique<FailingAnonymizer>();
    return anonymize::make_anonymizer(spec);
  };
  const ExperimentResult r = run_experiment(c, hooks).result;
  EXPECT_TRUE(r.has_failures());
  ASSERT_EQ(r.task_cells.size(), 4u);
  for (const auto& t : c.tasks) {
    const TaskCell* good = r.find_task_cell("ok", t.name);
    EXPECT_EQ(good->status, CellStatus::kOk);
    EXPECT_TRUE(good->result);
    const TaskCell* bad = r.find_task_cell("down", t.name);
    EXPECT_EQ(bad->status, CellStatus::kError);
    EXPECT_FALSE(bad->result);
    EXPECT_NE(bad->error->find("endpoint down"), std::string::npos);
    EXPECT_EQ(r.find_metric_cell("down", t.name, "rouge1")->status, CellStatus::kError);
    EXPECT_EQ(r.find_metric_cell("ok", t.name, "rouge1")->primary(), 1.0);
  }
}

TEST(RunTest, UntrainedTasksAreSkipped) {
  ExperimentConfig c;
  c.exp_name = "skip";
  c.anonymizers = {AnonymizerSpec::identity()};
  c.tasks = {category_task(60, 30), deid_task(20)};
  c.train_task_models = false;
  const ExperimentResult r = run_experiment(c).result;
  EXPECT_EQ(r.find_task_cell("identity", "category")->status, CellStatus::kSkipped);
  EXPECT_EQ(r.find_task_cell("identity", "deid")->status, CellStatus::kOk);
  EXPECT_FALSE(r.has_failures());
}

TEST(RunTest, SpecEditInvalidatesCache) {
  TempDir dir;
  ExperimentConfig c;
  c.exp_name = "edit";
  c.anonymizers = {AnonymizerSpec::with_strategy(Strategy::kFakerPlaceholder, 1)};
  c.tasks = {deid_task(10)};
  c.cache_dir = dir / "cache";
  std::atomic<int> calls{0};
  run_experiment(c, counting_hooks(&calls));
  calls = 0;
  c.anonymizers[0].seed = 2;
  run_experiment(c, counting_hooks(&calls));
  EXPECT_EQ(calls.load(), 10);
}

TEST(RunTest, CustomPluginsRunThroughTheExperiment) {
  testing::register_drop_tokens_plugin();
  testing::register_length_task_plugin();
  AnonymizerSpec drop;
  drop.name = "drop";
  drop.kind = anonymize::AnonymizerKind::kCustom;
  drop.plugin = "drop_tokens";
  drop.params = {{"tokens", {"The", "the", "to", "at", "is", "on", "for", "in"}}};
  tasks::TaskSpec length = deid_task(10);
  length.name = "length";
  length.kind = tasks::TaskKind::kCustom;
  length.plugin = "length_task";
  ExperimentConfig c;
  c.exp_name = "plugins";
  c.anonymizers = {drop};
  c.tasks = {length};
  c.metrics = {"rouge1"};
  const ExperimentResult r = run_experiment(c).result;
  ASSERT_EQ(r.task_cells[0].status, CellStatus::kOk) << r.task_cells[0].error.value_or("");
  EXPECT_EQ(r.task_cells[0].result->metric, "ratio");
  EXPECT_LT(*r.metric_cells[0].primary(), 1.0);
}

}  // namespace
}  // namespace anonbench::experiment
