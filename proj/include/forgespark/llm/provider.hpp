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

#ifndef FORGESPARK_LLM_PROVIDER_HPP_
#define FORGESPARK_LLM_PROVIDER_HPP_

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace forgespark::llm {

struct ChatMessage {
  enum class Role { System, User, Assistant };

  Role role = Role::User;
  std::string content;

  static ChatMessage system(std::string content) { return {Role::System, std::move(content)}; }
  static ChatMessage user(std::string content) { return {Role::User, std::move(content)}; }
  static ChatMessage assistant(std::string content) { return {Role::Assistant, std::move(content)}; }

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

const char* to_string(ChatMessage::Role role);

// An optional system message followed by strictly alternating user and
// assistant messages, starting with the user.
bool well_formed(const std::vector<ChatMessage>& conversation);

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Provider {
 public:
  virtual ~Provider() = default;
  // One request, no retries. Throws ProviderError.
  virtual ChatMessage send(const std::vector<ChatMessage>& messages) = 0;
};

// Replays canned replies in order.
class ScriptedProvider : public Provider {
 public:
  explicit ScriptedProvider(std::vector<std::string> replies);
  // Reads reply-001.md, reply-002.md, ... until the first missing number.
  static std::vector<std::string> read_script(const std::filesystem::path& dir);
  static ScriptedProvider from_directory(const std::filesystem::path& dir);

  ChatMessage send(const std::vector<ChatMessage>& messages) override;

  std::size_t sent() const;
  std::vector<std::vector<ChatMessage>> requests() const;

 private:
  std::vector<std::string> replies_;
  std::vector<std::vector<ChatMessage>> requests_;
  mutable std::mutex mutex_;
};

struct WireConfig {
  std::string base_url;  // e.g. "https://api.openai.com" or "http://127.0.0.1:8080/proxy"
  std::string model;
  std::string token;
  double temperature = 0.2;
  int timeout_seconds = 120;
};

// POST {base_url}/v1/chat/completions in the OpenAI chat format.
class OpenAiProvider : public Provider {
 public:
  explicit OpenAiProvider(WireConfig config);
  ChatMessage send(const std::vector<ChatMessage>& messages) override;

  // The JSON body sent for `messages`.
  std::string request_body(const std::vector<ChatMessage>& messages) const;

 private:
  WireConfig config_;
};

// Content of choices[0].message.content; throws ProviderError when absent.
std::string extract_content(const std::string& response_body);

}  // namespace forgespark::llm

#endif  // FORGESPARK_LLM_PROVIDER_HPP_
