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

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace anonbench::testing {

/// Minimal chat-completion endpoint on 127.0.0.1 for adapter tests.
class StubChatServer {
 public:
  struct Reply {
    int status = 200;
    std::string body;
  };
  /// Receives the user message content and the 0-based request number.
  using Handler = std::function<Reply(const std::string& prompt, int request)>;

  explicit StubChatServer(Handler handler);
  ~StubChatServer();
  StubChatServer(const StubChatServer&) = delete;
  StubChatServer& operator=(const StubChatServer&) = delete;

  /// `http://127.0.0.1:<port>/v1`
  std::string base_url() const;
  int requests() const;
  std::vector<std::string> prompts() const;
  std::vector<std::string> authorization_headers() const;

  /// A well-formed completion body whose first choice carries `content`.
  static std::string completion(const std::string& content);
  static Reply ok(const std::string& content) { return {200, completion(content)}; }

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  Handler handler_;
  mutable std::mutex mutex_;
  std::vector<std::string> prompts_;
  std::vector<std::string> auth_;
};

/// Reserves a local port with nothing listening on it.
int unused_local_port();

}  // namespace anonbench::testing
