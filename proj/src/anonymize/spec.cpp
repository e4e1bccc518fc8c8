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

#include <array>

#include "anonbench/anonymize.hpp"
#include "anonbench/error.hpp"
#include "anonbench/hash.hpp"

namespace anonbench::anonymize {

namespace {

using json = nlohmann::json;
using namespace std::string_view_literals;

constexpr std::array kKindNames = {"identity"sv, "strategy"sv, "external"sv,
                                   "custom"sv};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

std::string_view to_string(AnonymizerKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

AnonymizerKind parse_anonymizer_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<AnonymizerKind>(i);
  }
  throw ConfigError("unknown anonymizer kind '" + std::string(name) + "'");
}

AnonymizerSpec AnonymizerSpec::identity(std::string name) {
  AnonymizerSpec spec;
  spec.name = std::move(name);
  spec.kind = AnonymizerKind::kIdentity;
  return spec;
}

AnonymizerSpec AnonymizerSpec::with_strategy(Strategy strategy,
                                             std::uint64_t seed) {
  AnonymizerSpec spec;
  spec.name = std::string(to_string(strategy));
  spec.kind = AnonymizerKind::kStrategy;
  spec.strategy = strategy;
  spec.seed = seed;
  return spec;
}

void validate(const AnonymizerSpec& spec) {
  if (spec.name.empty()) throw ConfigError("anonymizer name is empty");
  const std::string who = "anonymizer '" + spec.name + "': ";
  switch (spec.kind) {
    case AnonymizerKind::kIdentity:
      break;
    case AnonymizerKind::kStrategy:
      if (!spec.strategy) throw ConfigError(who + "kind=strategy needs a strategy id");
      break;
    case AnonymizerKind::kExternal:
      if (!spec.endpoint) throw ConfigError(who + "kind=external needs an endpoint");
      if (!spec.prompt_template) {
        throw ConfigError(who + "kind=external needs a prompt_template");
      }
      if (spec.prompt_template->find("{text}") == std::string::npos) {
        throw ConfigError(who + "prompt_template lacks the {text} placeholder");
      }
      if (spec.endpoint->base_url.empty() || spec.endpoint->model.empty()) {
        throw ConfigError(who + "endpoint needs base_url and model");
      }
      if (spec.endpoint->max_retries < 0 || spec.endpoint->max_in_flight < 1 ||
          spec.endpoint->timeout_seconds <= 0) {
        throw ConfigError(who + "endpoint retry/in-flight/timeout out of range");
      }
      break;
    case AnonymizerKind::kCustom:
      if (!spec.plugin || spec.plugin->empty()) {
        throw ConfigError(who + "kind=custom needs a plugin name");
      }
      break;
  }
}

std::string spec_hash(const AnonymizerSpec& spec) {
  ContentHasher h;
  h.add("anonbench.anonymizer.v1").add(to_string(spec.kind));
  h.add(spec.strategy ? to_string(*spec.strategy) : "");
  h.add(static_cast<std::int64_t>(spec.seed));
  if (spec.endpoint) {
    h.add_tag('+').add(spec.endpoint->base_url).add(spec.endpoint->model);
  } else {
    h.add_tag('-');
  }
  h.add(spec.prompt_template.value_or(""));
  h.add(spec.plugin.value_or(""));
  h.add(spec.params.dump());
  return h.hex();
}

json to_json(const AnonymizerSpec& spec) {
  json j = {{"name", spec.name},
            {"kind", std::string(to_string(spec.kind))},
            {"seed", spec.seed}};
  if (spec.strategy) j["strategy"] = std::string(to_string(*spec.strategy));
  if (spec.endpoint) {
    const EndpointConfig& e = *spec.endpoint;
    j["endpoint"] = {{"base_url", e.base_url},
                     {"model", e.model},
                     {"auth_env", e.auth_env},
                     {"timeout_seconds", e.timeout_seconds},
                     {"max_retries", e.max_retries},
                     {"max_in_flight", e.max_in_flight},
                     {"backoff_initial_ms", e.backoff_initial_ms}};
  }
  if (spec.prompt_template) j["prompt_template"] = *spec.prompt_template;
  if (spec.plugin) j["plugin"] = *spec.plugin;
  if (!spec.params.empty()) j["params"] = spec.params;
  return j;
}

AnonymizerSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("anonymizer entry must be an object");
  AnonymizerSpec spec;
  try {
    spec.name = j.at("name").get<std::string>();
    if (auto it = j.find("strategy"); it != j.end()) {
      try {
        spec.strategy = parse_strategy(it->get<std::string>());
      } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
      }
    }
    const std::string default_kind = spec.strategy ? "strategy" : "identity";
    spec.kind = parse_anonymizer_kind(get_or<std::string>(j, "kind", default_kind));
    spec.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (auto it = j.find("endpoint"); it != j.end()) {
      const json& e = *it;
      EndpointConfig cfg;
      cfg.base_url = e.at("base_url").get<std::string>();
      cfg.model = e.at("model").get<std::string>();
      cfg.auth_env = get_or<std::string>(e, "auth_env", "");
      cfg.timeout_seconds = get_or<double>(e, "timeout_seconds", cfg.timeout_seconds);
      cfg.max_retries = get_or<int>(e, "max_retries", cfg.max_retries);
      cfg.max_in_flight = get_or<int>(e, "max_in_flight", cfg.max_in_flight);
      cfg.backoff_initial_ms =
          get_or<int>(e, "backoff_initial_ms", cfg.backoff_initial_ms);
      spec.endpoint = cfg;
    }
    if (auto it = j.find("prompt_template"); it != j.end()) {
      spec.prompt_template = resolve_prompt_template(it->get<std::string>());
    }
    if (auto it = j.find("plugin"); it != j.end()) {
      spec.plugin = it->get<std::string>();
    }
    if (auto it = j.find("params"); it != j.end()) spec.params = *it;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("anonymizer entry: ") + e.what());
  }
  validate(spec);
  return spec;
}

}  // namespace anonbench::anonymize
