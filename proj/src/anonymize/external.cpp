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

#include "httplib.h"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "anonbench/anonymize.hpp"
#include "anonbench/error.hpp"

namespace anonbench::anonymize {

namespace {

using json = nlohmann::json;

class InFlightLimiter {
 public:
  explicit InFlightLimiter(int capacity) : available_(capacity) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [this] { return available_ > 0; });
    --available_;
  }
  void release() {
    {
      std::lock_guard lock(mutex_);
      ++available_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int available_;
};

class InFlightSlot {
 public:
  explicit InFlightSlot(InFlightLimiter& limiter) : limiter_(limiter) {
    limiter_.acquire();
  }
  ~InFlightSlot() { limiter_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  InFlightLimiter& limiter_;
};

InFlightLimiter& limiter_for(const EndpointConfig& endpoint) {
  static std::mutex m;
  static std::map<std::string, std::unique_ptr<InFlightLimiter>> limiters;
  const std::string key = endpoint.base_url + "|" + endpoint.model + "|" +
                          std::to_string(endpoint.max_in_flight);
  std::lock_guard lock(m);
  auto& slot = limiters[key];
  if (!slot) slot = std::make_unique<InFlightLimiter>(std::max(1, endpoint.max_in_flight));
  return *slot;
}

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

ParsedUrl parse_base_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint base_url '" + url + "' has no scheme");
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl parsed;
  parsed.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) parsed.path = url.substr(path_start);
  while (!parsed.path.empty() && parsed.path.back() == '/') parsed.path.pop_back();
  return parsed;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(first, last - first + 1));
}

void set_timeouts(httplib::Client& client, double seconds) {
  const auto micros = static_cast<long long>(seconds * 1e6);
  const time_t sec = static_cast<time_t>(micros / 1000000);
  const time_t usec = static_cast<time_t>(micros % 1000000);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
}

std::string completion_content(const std::string& body) {
  json response;
  try {
    response = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("completion body is not JSON: ") + e.what());
  }
  const json* content = nullptr;
  try {
    content = &response.at("choices").at(0).at("message").at("content");
  } catch (const json::exception&) {
    throw ProtocolError("completion lacks choices[0].message.content");
  }
  if (!content->is_string()) {
    throw ProtocolError("completion content is not a string");
  }
  std::string text = trim(content->get<std::string>());
  if (text.empty()) throw ProtocolError("empty completion");
  return text;
}

}  // namespace

// Figure text shipped verbatim, followed by the record slot.
const std::string_view kAuthorshipObfuscationPrompt =
    "Rewrite the text to significantly alter its style, tone, and word choice "
    "while preserving the original meaning. Use figurative or descriptive "
    "language, vary sentence structures, adjust tone (e.g., formal to "
    "conversational), and employ unique synonyms. Avoid retaining distinctive "
    "stylistic markers. Respond only with the transformed text.\n\n{text}";

const std::string_view kPiiRedactionPrompt =
    "Anonymize user-submitted text by replacing personally identifiable "
    "information (PII) like names, dates, locations, and professions with "
    "alternate values. Ensure the rewritten text is natural, coherent, and "
    "contextually consistent while preserving the original meaning and tone. "
    "Respond only with the transformed text.\n\n{text}";

std::string resolve_prompt_template(std::string_view value) {
  if (value == "builtin:authorship_obfuscation") {
    return std::string(kAuthorshipObfuscationPrompt);
  }
  if (value == "builtin:pii_redaction") return std::string(kPiiRedactionPrompt);
  return std::string(value);
}

std::string instantiate_prompt(std::string_view prompt_template,
                               std::string_view text) {
  static constexpr std::string_view kSlot = "{text}";
  if (prompt_template.find(kSlot) == std::string_view::npos) {
    throw ConfigError("prompt template lacks the {text} placeholder");
  }
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = prompt_template.find(kSlot, pos);
    if (hit == std::string_view::npos) break;
    out.append(prompt_template.substr(pos, hit - pos));
    out.append(text);
    pos = hit + kSlot.size();
  }
  out.append(prompt_template.substr(pos));
  return out;
}

std::string external_anonymize(const EndpointConfig& endpoint,
                               std::string_view prompt_template,
                               std::string_view text) {
  const std::string prompt = instantiate_prompt(prompt_template, text);
  const ParsedUrl url = parse_base_url(endpoint.base_url);
  const std::string path = url.path + "/chat/completions";

  httplib::Headers headers;
  if (!endpoint.auth_env.empty()) {
    if (const char* token = std::getenv(endpoint.auth_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    } else {
      spdlog::warn("auth variable {} is not set; sending unauthenticated request",
                   endpoint.auth_env);
    }
  }
  const std::string body =
      json{{"model", endpoint.model},
           {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}}
          .dump();

  InFlightSlot slot(limiter_for(endpoint));
  std::string last_failure;
  const int attempts = 1 + std::max(0, endpoint.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(
          static_cast<long long>(endpoint.backoff_initial_ms) << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
    httplib::Client client(url.origin);
    set_timeouts(client, endpoint.timeout_seconds);
    auto response = client.Post(path, headers, body, "application/json");
    if (!response) {
      last_failure = "transport error: " + httplib::to_string(response.error());
      spdlog::debug("{} attempt {} failed: {}", endpoint.base_url, attempt + 1,
                    last_failure);
      continue;
    }
    const int status = response->status;
    if (status >= 500) {
      last_failure = "HTTP " + std::to_string(status);
      spdlog::debug("{} attempt {} failed: {}", endpoint.base_url, attempt + 1,
                    last_failure);
      continue;
    }
    if (status >= 400) {
      throw TransportError("endpoint " + endpoint.base_url + " rejected request: HTTP " +
                               std::to_string(status),
                           status);
    }
    if (status < 200 || status >= 300) {
      throw ProtocolError("unexpected HTTP status " + std::to_string(status));
    }
    return completion_content(response->body);
  }
  throw TransportError("endpoint " + endpoint.base_url + " failed after " +
                       std::to_string(attempts) + " attempts: " + last_failure);
}

}  // namespace anonbench::anonymize
