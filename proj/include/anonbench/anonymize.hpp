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

#include "anonbench/corpus.hpp"
#include "anonbench/parallel.hpp"
#include "json.hpp"

namespace anonbench::anonymize {

using corpus::Category;
using corpus::EntitySpan;

// ---------------------------------------------------------------------------
// Detection

struct DetectionResult {
  std::vector<EntitySpan> spans;
  std::string detector_version;
};

inline constexpr std::string_view kDetectorVersion = "regex-gazetteer/1";

/// Deterministic PII detector.
///
/// EMAIL, PHONE, DATE, ID and URL come from fixed regular expressions (see
/// detector.cpp); PERSON and LOCATION from the built-in gazetteers, matched
/// case-sensitively on token boundaries, with adjacent person-name tokens
/// merged into one span. Overlaps are resolved longest match first, then
/// leftmost; the remainder is dropped.
DetectionResult detect_entities(std::string_view text);

// ---------------------------------------------------------------------------
// Strategies

enum class Strategy {
  kUniquePlaceholder,
  kEntityDeletion,
  kUniformPlaceholder,
  kCategoryPlaceholder,
  kFakerPlaceholder,
};

std::string_view to_string(Strategy strategy);
/// Throws ArgumentError for unknown ids.
Strategy parse_strategy(std::string_view id);
std::span<const Strategy> all_strategies();

inline constexpr std::string_view kRedactedToken = "[REDACTED]";

/// Rewrites every span of `text` according to `strategy`, right to left.
///
/// `document_id` keys the faker surrogates together with `seed` and the
/// surface; when absent the SHA-256 of `text` is used.
std::string apply_strategy(std::string_view text,
                           std::span<const EntitySpan> spans, Strategy strategy,
                           std::uint64_t seed,
                           std::optional<std::string_view> document_id = {});

/// Overload taking the strategy id as text; throws ArgumentError if unknown.
std::string apply_strategy(std::string_view text,
                           std::span<const EntitySpan> spans,
                           std::string_view strategy, std::uint64_t seed);

/// Surrogate for `surface` under the faker strategy.
std::string faker_surrogate(Category category, std::uint64_t seed,
                            std::string_view document_id,
                            std::string_view surface);

// ---------------------------------------------------------------------------
// External prompted models

struct EndpointConfig {
  /// Base URL of an OpenAI-style API, e.g. `http://127.0.0.1:8080/v1`.
  std::string base_url;
  std::string model;
  /// Name of the environment variable holding the bearer token. Empty for
  /// unauthenticated endpoints.
  std::string auth_env;
  double timeout_seconds = 60.0;
  int max_retries = 3;
  int max_in_flight = 4;
  /// First retry delay; doubles on every further attempt.
  int backoff_initial_ms = 500;

  bool operator==(const EndpointConfig&) const = default;
};

/// Prompt used for authorship obfuscation runs.
extern const std::string_view kAuthorshipObfuscationPrompt;
/// Prompt used for PII redaction runs.
extern const std::string_view kPiiRedactionPrompt;

/// Resolves `builtin:authorship_obfuscation` / `builtin:pii_redaction` to the
/// shipped templates; any other value is returned as is.
std::string resolve_prompt_template(std::string_view value);

/// Substitutes every `{text}`. Throws ConfigError when the template has none.
std::string instantiate_prompt(std::string_view prompt_template,
                               std::string_view text);

/// Sends the instantiated prompt as a single user message to
/// `<base_url>/chat/completions` and returns the first choice's content,
/// trimmed. Transport failures and 5xx answers are retried up to
/// `max_retries` times with exponential backoff; 4xx answers are not.
/// At most `max_in_flight` requests per (base_url, model) run at once.
std::string external_anonymize(const EndpointConfig& endpoint,
                               std::string_view prompt_template,
                               std::string_view text);

// ---------------------------------------------------------------------------
// Anonymizer specs and the black-box contract

enum class AnonymizerKind { kIdentity, kStrategy, kExternal, kCustom };

std::string_view to_string(AnonymizerKind kind);
AnonymizerKind parse_anonymizer_kind(std::string_view name);

struct AnonymizerSpec {
  std::string name;
  AnonymizerKind kind = AnonymizerKind::kIdentity;
  std::optional<Strategy> strategy;
  std::uint64_t seed = 0;
  std::optional<EndpointConfig> endpoint;
  std::optional<std::string> prompt_template;
  /// Registered factory name for kind=custom.
  std::optional<std::string> plugin;
  /// Free-form parameters handed to custom factories.
  nlohmann::json params = nlohmann::json::object();

  bool operator==(const AnonymizerSpec&) const = default;

  static AnonymizerSpec identity(std::string name = "identity");
  static AnonymizerSpec with_strategy(Strategy strategy, std::uint64_t seed = 0);
};

/// Throws ConfigError when kind-specific fields are missing or invalid.
void validate(const AnonymizerSpec& spec);

/// Content hash of every field that changes the output.
std::string spec_hash(const AnonymizerSpec& spec);

nlohmann::json to_json(const AnonymizerSpec& spec);
AnonymizerSpec spec_from_json(const nlohmann::json& j);

/// A black-box text-to-text transform.
class Anonymizer {
 public:
  virtual ~Anonymizer() = default;

  virtual const std::string& name() const = 0;
  virtual std::string anonymize(std::string_view text) = 0;

  /// Element-wise `anonymize`, order preserved. The default runs up to
  /// `max_concurrency()` elements at once; the first failure aborts the batch
  /// with a BatchError carrying the failing index.
  virtual std::vector<std::string> anonymize_batch(
      std::span<const std::string> texts);

  /// Upper bound on concurrent `anonymize` calls this instance tolerates.
  virtual std::size_t max_concurrency() const { return 1; }
};

using AnonymizerFactory =
    std::function<std::unique_ptr<Anonymizer>(const AnonymizerSpec&)>;

/// Registers a factory used for kind=custom specs whose `plugin` equals
/// `plugin`. Replaces any previous registration.
void register_anonymizer(const std::string& plugin, AnonymizerFactory factory);

/// Builds the anonymizer for a validated spec.
std::unique_ptr<Anonymizer> make_anonymizer(const AnonymizerSpec& spec);

std::string anonymize(const AnonymizerSpec& spec, std::string_view text);
std::vector<std::string> anonymize_batch(const AnonymizerSpec& spec,
                                         std::span<const std::string> texts);

using anonbench::parallel_for_each_index;

}  // namespace anonbench::anonymize
