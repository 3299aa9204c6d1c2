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

#ifndef FORGESPARK_SESSION_CONFIG_HPP_
#define FORGESPARK_SESSION_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace forgespark::session {

inline constexpr const char* kConfigFileName = "forgespark.json";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LlmConfig {
  std::string provider = "openai";  // "openai" or "scripted"
  std::string base_url = "https://api.openai.com";
  std::string model = "gpt-4o-mini";
  std::string token_env = "FORGESPARK_LLM_TOKEN";
  std::size_t max_iterations = 3;
  std::size_t token_budget = 4000;
  int input_depth = 2;
  int polymorphism_depth = 2;
  std::string prompt_template_path;
  std::string scripted_dir;
};

struct SbstConfig {
  std::size_t population = 50;
  std::size_t max_evaluations = 10000;
  std::uint64_t seed = 42;
};

struct ForgeConfig {
  LlmConfig llm;
  SbstConfig sbst;
  std::size_t step_budget = 100000;  // runtime.step_budget
  int port = 8642;                   // service.port
  bool telemetry_enabled = true;     // telemetry.enabled

  friend bool operator==(const ForgeConfig&, const ForgeConfig&);
};

// Dotted names of every key, e.g. "llm.base_url".
const std::vector<std::string>& config_keys();

// Sets one key from a JSON value of the right type. Strings are also accepted
// for numeric and boolean keys so flags and environment values can be passed
// through unchanged. Throws ConfigError on an unknown key or a bad value.
void set_key(ForgeConfig& config, const std::string& key, const nlohmann::json& value);

// Applies a nested object ({"llm": {"model": ...}}) or flat dotted keys.
void apply_json(ForgeConfig& config, const nlohmann::json& overrides);

nlohmann::json to_json(const ForgeConfig& config);

// Defaults overlaid with `<root>/forgespark.json` when it exists.
ForgeConfig load_config(const std::filesystem::path& project_root);

// "llm.base_url" -> "FORGESPARK_LLM_BASE_URL".
std::string env_name(const std::string& key);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_environment();

// Overlays every key whose environment variable is set.
void apply_environment(ForgeConfig& config, const EnvLookup& env);

}  // namespace forgespark::session

#endif  // FORGESPARK_SESSION_CONFIG_HPP_
