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

#include "forgespark/session/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>

namespace forgespark::session {

using nlohmann::json;

namespace {

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(key + " must be a string");
  return v.get<std::string>();
}

std::int64_t as_int(const std::string& key, const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    try {
      std::int64_t n = std::stoll(s, &used);
      if (used == s.size()) return n;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(key + " must be an integer");
}

std::size_t as_count(const std::string& key, const json& v, std::int64_t min) {
  std::int64_t n = as_int(key, v);
  if (n < min) throw ConfigError(key + " must be at least " + std::to_string(min));
  return static_cast<std::size_t>(n);
}

bool as_bool(const std::string& key, const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
  }
  throw ConfigError(key + " must be a boolean");
}

using Setter = std::function<void(ForgeConfig&, const std::string&, const json&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"llm.provider",
       [](ForgeConfig& c, const std::string& k, const json& v) {
         std::string p = as_string(k, v);
         if (p != "openai" && p != "scripted") throw ConfigError(k + " must be 'openai' or 'scripted'");
         c.llm.provider = p;
       }},
      {"llm.base_url", [](ForgeConfig& c, const std::string& k, const json& v) { c.llm.base_url = as_string(k, v); }},
      {"llm.model", [](ForgeConfig& c, const std::string& k, const json& v) { c.llm.model = as_string(k, v); }},
      {"llm.token_env", [](ForgeConfig& c, const std::string& k, const json& v) { c.llm.token_env = as_string(k, v); }},
      {"llm.max_iterations",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.llm.max_iterations = as_count(k, v, 1); }},
      {"llm.token_budget",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.llm.token_budget = as_count(k, v, 1); }},
      {"llm.input_depth",
       [](ForgeConfig& c, const std::string& k, const json& v) {
         c.llm.input_depth = static_cast<int>(as_count(k, v, 0));
       }},
      {"llm.polymorphism_depth",
       [](ForgeConfig& c, const std::string& k, const json& v) {
         c.llm.polymorphism_depth = static_cast<int>(as_count(k, v, 0));
       }},
      {"llm.prompt_template_path",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.llm.prompt_template_path = as_string(k, v); }},
      {"llm.scripted_dir",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.llm.scripted_dir = as_string(k, v); }},
      {"sbst.population",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.sbst.population = as_count(k, v, 2); }},
      {"sbst.max_evaluations",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.sbst.max_evaluations = as_count(k, v, 1); }},
      {"sbst.seed",
       [](ForgeConfig& c, const std::string& k, const json& v) {
         c.sbst.seed = static_cast<std::uint64_t>(as_count(k, v, 0));
       }},
      {"runtime.step_budget",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.step_budget = as_count(k, v, 1); }},
      {"service.port",
       [](ForgeConfig& c, const std::string& k, const json& v) {
         std::int64_t p = as_int(k, v);
         if (p < 0 || p > 65535) throw ConfigError(k + " must be a port number");
         c.port = static_cast<int>(p);
       }},
      {"telemetry.enabled",
       [](ForgeConfig& c, const std::string& k, const json& v) { c.telemetry_enabled = as_bool(k, v); }},
  };
  return table;
}

}  // namespace

bool operator==(const ForgeConfig& a, const ForgeConfig& b) { return to_json(a) == to_json(b); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void set_key(ForgeConfig& config, const std::string& key, const json& value) {
  auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

void apply_json(ForgeConfig& config, const json& overrides) {
  if (!overrides.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (value.is_object()) {
      for (const auto& [inner, v] : value.items()) set_key(config, key + "." + inner, v);
    } else {
      set_key(config, key, value);
    }
  }
}

json to_json(const ForgeConfig& c) {
  return json{{"llm",
               {{"provider", c.llm.provider},
                {"base_url", c.llm.base_url},
                {"model", c.llm.model},
                {"token_env", c.llm.token_env},
                {"max_iterations", c.llm.max_iterations},
                {"token_budget", c.llm.token_budget},
                {"input_depth", c.llm.input_depth},
                {"polymorphism_depth", c.llm.polymorphism_depth},
                {"prompt_template_path", c.llm.prompt_template_path},
                {"scripted_dir", c.llm.scripted_dir}}},
              {"sbst", {{"population", c.sbst.population}, {"max_evaluations", c.sbst.max_evaluations}, {"seed", c.sbst.seed}}},
              {"runtime", {{"step_budget", c.step_budget}}},
              {"service", {{"port", c.port}}},
              {"telemetry", {{"enabled", c.telemetry_enabled}}}};
}

ForgeConfig load_config(const std::filesystem::path& project_root) {
  ForgeConfig config;
  const auto path = project_root / kConfigFileName;
  if (!std::filesystem::exists(path)) return config;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  apply_json(config, doc);
  return config;
}

std::string env_name(const std::string& key) {
  std::string out = "FORGESPARK_";
  for (char ch : key) out += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

void apply_environment(ForgeConfig& config, const EnvLookup& env) {
  for (const auto& key : config_keys()) {
    if (auto v = env(env_name(key))) set_key(config, key, *v);
  }
}

}  // namespace forgespark::session
