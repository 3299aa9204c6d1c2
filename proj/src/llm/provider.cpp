// Copyright 2026 The ForgeSpark Authors
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

#include "forgespark/llm/provider.hpp"

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace forgespark::llm {

using nlohmann::json;

const char* to_string(ChatMessage::Role role) {
  switch (role) {
    case ChatMessage::Role::System:
      return "system";
    case ChatMessage::Role::User:
      return "user";
    case ChatMessage::Role::Assistant:
      return "assistant";
  }
  return "user";
}

bool well_formed(const std::vector<ChatMessage>& conversation) {
  std::size_t i = 0;
  if (!conversation.empty() && conversation[0].role == ChatMessage::Role::System) i = 1;
  for (std::size_t k = i; k < conversation.size(); ++k) {
    auto expected = (k - i) % 2 == 0 ? ChatMessage::Role::User : ChatMessage::Role::Assistant;
    if (conversation[k].role != expected) return false;
  }
  return true;
}

ScriptedProvider::ScriptedProvider(std::vector<std::string> replies) : replies_(std::move(replies)) {}

std::vector<std::string> ScriptedProvider::read_script(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ProviderError("script directory not found: " + dir.string());
  std::vector<std::string> replies;
  for (int n = 1;; ++n) {
    char name[32];
    std::snprintf(name, sizeof name, "reply-%03d.md", n);
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) break;
    std::ostringstream text;
    text << in.rdbuf();
    replies.push_back(text.str());
  }
  return replies;
}

ScriptedProvider ScriptedProvider::from_directory(const std::filesystem::path& dir) {
  return ScriptedProvider(read_script(dir));
}

ChatMessage ScriptedProvider::send(const std::vector<ChatMessage>& messages) {
  std::lock_guard lock(mutex_);
  requests_.push_back(messages);
  if (requests_.size() > replies_.size()) throw ProviderError("script exhausted");
  return ChatMessage::assistant(replies_[requests_.size() - 1]);
}

std::size_t ScriptedProvider::sent() const {
  std::lock_guard lock(mutex_);
  return requests_.size();
}

std::vector<std::vector<ChatMessage>> ScriptedProvider::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

OpenAiProvider::OpenAiProvider(WireConfig config) : config_(std::move(config)) {}

std::string OpenAiProvider::request_body(const std::vector<ChatMessage>& messages) const {
  json body;
  body["model"] = config_.model;
  body["temperature"] = config_.temperature;
  body["messages"] = json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return body.dump();
}

std::string extract_content(const std::string& response_body) {
  json parsed = json::parse(response_body, nullptr, false);
  if (parsed.is_discarded()) throw ProviderError("response is not JSON");
  try {
    const json& content = parsed.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw ProviderError("missing content field");
    return content.get<std::string>();
  } catch (const json::exception&) {
    throw ProviderError("missing content field");
  }
}

ChatMessage OpenAiProvider::send(const std::vector<ChatMessage>& messages) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.base_url, m, url)) throw ProviderError("invalid base_url: " + config_.base_url);
  std::string prefix = m[2].str();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(m[1].str());
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);
  client.set_write_timeout(config_.timeout_seconds);
  httplib::Headers headers{{"Authorization", "Bearer " + config_.token}};
  auto res = client.Post(prefix + "/v1/chat/completions", headers, request_body(messages), "application/json");
  if (!res) throw ProviderError("transport error: " + httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403) throw ProviderError("authentication");
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  return ChatMessage::assistant(extract_content(res->body));
}

}  // namespace forgespark::llm
