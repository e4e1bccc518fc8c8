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
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "anonbench/anonymize.hpp"
#include "anonbench/error.hpp"

namespace anonbench::anonymize {

namespace {

class IdentityAnonymizer final : public Anonymizer {
 public:
  explicit IdentityAnonymizer(std::string name) : name_(std::move(name)) {}
  const std::string& name() const override { return name_; }
  std::string anonymize(std::string_view text) override {
    return std::string(text);
  }
  std::size_t max_concurrency() const override { return hardware_workers(); }

 private:
  std::string name_;
};

class StrategyAnonymizer final : public Anonymizer {
 public:
  StrategyAnonymizer(std::string name, Strategy strategy, std::uint64_t seed)
      : name_(std::move(name)), strategy_(strategy), seed_(seed) {}
  const std::string& name() const override { return name_; }
  std::string anonymize(std::string_view text) override {
    const DetectionResult detected = detect_entities(text);
    return apply_strategy(text, detected.spans, strategy_, seed_);
  }
  std::size_t max_concurrency() const override { return hardware_workers(); }

 private:
  std::string name_;
  Strategy strategy_;
  std::uint64_t seed_;
};

class ExternalAnonymizer final : public Anonymizer {
 public:
  ExternalAnonymizer(std::string name, EndpointConfig endpoint,
                     std::string prompt_template)
      : name_(std::move(name)),
        endpoint_(std::move(endpoint)),
        prompt_template_(std::move(prompt_template)) {}
  const std::string& name() const override { return name_; }
  std::string anonymize(std::string_view text) override {
    return external_anonymize(endpoint_, prompt_template_, text);
  }
  std::size_t max_concurrency() const override {
    return static_cast<std::size_t>(std::max(1, endpoint_.max_in_flight));
  }

 private:
  std::string name_;
  EndpointConfig endpoint_;
  std::string prompt_template_;
};

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, AnonymizerFactory>& registry() {
  static std::map<std::string, AnonymizerFactory> r;
  return r;
}

}  // namespace

std::vector<std::string> Anonymizer::anonymize_batch(
    std::span<const std::string> texts) {
  std::vector<std::string> out(texts.size());
  parallel_for_each_index(texts.size(), max_concurrency(),
                          [&](std::size_t i) { out[i] = anonymize(texts[i]); });
  return out;
}

void register_anonymizer(const std::string& plugin, AnonymizerFactory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[plugin] = std::move(factory);
}

std::unique_ptr<Anonymizer> make_anonymizer(const AnonymizerSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case AnonymizerKind::kIdentity:
      return std::make_unique<IdentityAnonymizer>(spec.name);
    case AnonymizerKind::kStrategy:
      return std::make_unique<StrategyAnonymizer>(spec.name, *spec.strategy,
                                                  spec.seed);
    case AnonymizerKind::kExternal:
      return std::make_unique<ExternalAnonymizer>(spec.name, *spec.endpoint,
                                                  *spec.prompt_template);
    case AnonymizerKind::kCustom: {
      AnonymizerFactory factory;
      {
        std::lock_guard lock(registry_mutex());
        auto it = registry().find(*spec.plugin);
        if (it == registry().end()) {
          throw ConfigError("no anonymizer plugin registered as '" +
                            *spec.plugin + "'");
        }
        factory = it->second;
      }
      auto anonymizer = factory(spec);
      if (!anonymizer) {
        throw ConfigError("plugin '" + *spec.plugin + "' returned no anonymizer");
      }
      return anonymizer;
    }
  }
  throw ConfigError("unhandled anonymizer kind");
}

std::string anonymize(const AnonymizerSpec& spec, std::string_view text) {
  return make_anonymizer(spec)->anonymize(text);
}

std::vector<std::string> anonymize_batch(const AnonymizerSpec& spec,
                                         std::span<const std::string> texts) {
  return make_anonymizer(spec)->anonymize_batch(texts);
}

}  // namespace anonbench::anonymize
