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

#include "stub_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdint>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace anonbench::testing {

using json = nlohmann::json;

StubChatServer::StubChatServer(Handler handler)
    : server_(std::make_unique<httplib::Server>()), handler_(std::move(handler)) {
  server_->Post("/v1/chat/completions",
                [this](const httplib::Request& req, httplib::Response& res) {
                  std::string prompt;
                  try {
                    prompt = json::parse(req.body)
                                 .at("messages")
                                 .at(0)
                                 .at("content")
                                 .get<std::string>();
                  } catch (const json::exception&) {
                    res.status = 400;
                    return;
                  }
                  int index = 0;
                  {
                    std::lock_guard lock(mutex_);
                    index = static_cast<int>(prompts_.size());
                    prompts_.push_back(prompt);
                    auth_.push_back(req.get_header_value("Authorization"));
                  }
                  const Reply reply = handler_(prompt, index);
                  res.status = reply.status;
                  res.set_content(reply.body, "application/json");
                });
  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

StubChatServer::~StubChatServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubChatServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/v1";
}

int StubChatServer::requests() const {
  std::lock_guard lock(mutex_);
  return static_cast<int>(prompts_.size());
}

std::vector<std::string> StubChatServer::prompts() const {
  std::lock_guard lock(mutex_);
  return prompts_;
}

std::vector<std::string> StubChatServer::authorization_headers() const {
  std::lock_guard lock(mutex_);
  return auth_;
}

std::string StubChatServer::completion(const std::string& content) {
  return json{{"id", "stub"},
              {"object", "chat.completion"},
              {"choices", json::array({{{"index", 0},
                                        {"message",
                                         {{"role", "assistant"},
                                          {"content", content}}},
                                        {"finish_reason", "stop"}}})}}
      .dump();
}

int unused_local_port() {
  // Bound but never listening, then closed. Stay below the ephemeral range so
  // a client cannot be handed the same port and connect to itself.
  for (int port = 20000; port < 30000; ++port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) break;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    const bool free = ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0;
    ::close(fd);
    if (free) return port;
  }
  throw std::runtime_error("no free local port below 30000");
}

}  // namespace anonbench::testing
