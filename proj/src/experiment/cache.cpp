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

#include <spdlog/spdlog.h>

#include "anonbench/error.hpp"
#include "anonbench/experiment.hpp"
#include "anonbench/fsutil.hpp"

namespace anonbench::experiment {

namespace {

using json = nlohmann::json;

}  // namespace

AnonymizationCache::AnonymizationCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string AnonymizationCache::key(const anonymize::AnonymizerSpec& spec,
                                    const std::string& dataset_fingerprint) {
  return anonymize::spec_hash(spec).substr(0, 32) + "_" + dataset_fingerprint.substr(0, 32);
}

AnonymizationCache::Entries& AnonymizationCache::load(const std::string& key) {
  auto it = loaded_.find(key);
  if (it != loaded_.end()) return it->second;
  Entries entries;
  const auto path = dir_ / (key + ".json");
  if (std::filesystem::exists(path)) {
    try {
      const json j = json::parse(read_text_file(path));
      for (const auto& [id, text] : j.at("entries").items()) {
        entries[id] = text.get<std::string>();
      }
    } catch (const std::exception& e) {
      spdlog::warn("ignoring corrupt cache file {}: {}", path.string(), e.what());
      entries.clear();
    }
  }
  return loaded_.emplace(key, std::move(entries)).first->second;
}

std::optional<std::string> AnonymizationCache::lookup(const anonymize::AnonymizerSpec& spec,
                                                      const std::string& dataset_fingerprint,
                                                      const std::string& record_id) {
  std::lock_guard lock(mutex_);
  const Entries& entries = load(key(spec, dataset_fingerprint));
  auto it = entries.find(record_id);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

void AnonymizationCache::store(const anonymize::AnonymizerSpec& spec,
                               const std::string& dataset_fingerprint,
                               const std::map<std::string, std::string>& new_entries) {
  std::lock_guard lock(mutex_);
  const std::string k = key(spec, dataset_fingerprint);
  Entries& entries = load(k);
  for (const auto& [id, text] : new_entries) entries[id] = text;
  const json j = {{"spec_hash", anonymize::spec_hash(spec)},
                  {"dataset_fingerprint", dataset_fingerprint},
                  {"entries", entries}};
  write_file_atomic(dir_ / (k + ".json"), j.dump() + "\n");
}

void AnonymizationCache::store(const anonymize::AnonymizerSpec& spec,
                               const std::string& dataset_fingerprint,
                               const std::string& record_id, const std::string& text) {
  store(spec, dataset_fingerprint, std::map<std::string, std::string>{{record_id, text}});
}

}  // namespace anonbench::experiment
