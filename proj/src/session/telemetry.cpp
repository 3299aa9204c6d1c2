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

#include "forgespark/session/telemetry.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <regex>

namespace forgespark::session {

using nlohmann::json;

const char* to_string(ModifiedRegion region) {
  switch (region) {
    case ModifiedRegion::Data:
      return "data";
    case ModifiedRegion::Calls:
      return "calls";
    case ModifiedRegion::Assertions:
      return "assertions";
  }
  return "?";
}

json TelemetryEvent::to_json() const {
  json out = {{"ts", timestamp}, {"kind", kind}};
  for (const auto& [k, v] : fields.items()) out[k] = v;
  return out;
}

TelemetryEvent TelemetryEvent::from_json(const json& record) {
  TelemetryEvent e;
  e.timestamp = record.value("ts", "");
  e.kind = record.at("kind").get<std::string>();
  for (const auto& [k, v] : record.items()) {
    if (k != "ts" && k != "kind") e.fields[k] = v;
  }
  return e;
}

namespace events {

TelemetryEvent generation_started(std::string_view technique, std::string_view uut_kind) {
  return {{}, "GenerationStarted", {{"technique", technique}, {"uut_kind", uut_kind}}};
}

TelemetryEvent generation_finished(std::string_view technique, bool success, std::int64_t duration_ms,
                                   std::size_t tests_count) {
  return {{},
          "GenerationFinished",
          {{"technique", technique}, {"success", success}, {"duration_ms", duration_ms}, {"tests_count", tests_count}}};
}

TelemetryEvent test_modified(ModifiedRegion region) { return {{}, "TestModified", {{"region", to_string(region)}}}; }

TelemetryEvent llm_feedback_sent() { return {{}, "LlmFeedbackSent", json::object()}; }

TelemetryEvent tests_integrated(std::size_t count, std::string_view technique) {
  return {{}, "TestsIntegrated", {{"count", count}, {"technique", technique}}};
}

TelemetryEvent test_run(bool passed) { return {{}, "TestRun", {{"passed", passed}}}; }

}  // namespace events

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.emplace_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

std::string trimmed(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Lines of `a` and `b` outside a longest common subsequence.
std::vector<std::string> changed_lines(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = trimmed(a[i]) == trimmed(b[j]) ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  std::vector<std::string> out;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (trimmed(a[i]) == trimmed(b[j])) {
      ++i, ++j;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
    }
  }
  while (i < n) out.push_back(a[i++]);
  while (j < m) out.push_back(b[j++]);
  return out;
}

}  // namespace

std::set<ModifiedRegion> classify_modification(std::string_view before, std::string_view after,
                                               const std::set<std::string>& project_functions) {
  static const std::regex assertion(R"(\b(assert|expect_error)\b)");
  static const std::regex call(R"(\b([A-Za-z_][A-Za-z0-9_]*)\s*\()");
  std::set<ModifiedRegion> out;
  for (const auto& line : changed_lines(split_lines(before), split_lines(after))) {
    if (trimmed(line).empty()) continue;
    if (std::regex_search(line, assertion)) {
      out.insert(ModifiedRegion::Assertions);
      continue;
    }
    bool calls = false;
    for (auto it = std::sregex_iterator(line.begin(), line.end(), call); it != std::sregex_iterator(); ++it) {
      if (project_functions.count((*it)[1].str())) calls = true;
    }
    out.insert(calls ? ModifiedRegion::Calls : ModifiedRegion::Data);
  }
  return out;
}

std::string utc_now() {
  using namespace std::chrono;
  auto now = system_clock::now();
  auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

TelemetryLog::TelemetryLog(std::filesystem::path directory, bool enabled, Clock clock)
    : directory_(std::move(directory)), enabled_(enabled), clock_(std::move(clock)) {}

void TelemetryLog::record(TelemetryEvent event) {
  if (!enabled_) return;
  std::lock_guard lock(mutex_);
  if (event.timestamp.empty()) event.timestamp = clock_();
  history_.push_back(event);
  pending_.push_back(std::move(event));
}

void TelemetryLog::flush() {
  std::lock_guard lock(mutex_);
  if (!enabled_ || pending_.empty()) return;
  std::string chunk;
  for (const auto& e : pending_) chunk += e.to_json().dump() + "\n";
  pending_.clear();
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  std::ofstream out(path(), std::ios::binary | std::ios::app);
  if (!out || !out.write(chunk.data(), static_cast<std::streamsize>(chunk.size())) || !out.flush()) {
    spdlog::warn("telemetry: cannot append to {}", path().string());
  }
}

std::vector<TelemetryEvent> TelemetryLog::history() const {
  std::lock_guard lock(mutex_);
  return history_;
}

std::vector<TelemetryEvent> read_log(const std::filesystem::path& file) {
  std::vector<TelemetryEvent> out;
  std::ifstream in(file);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(TelemetryEvent::from_json(json::parse(line)));
  }
  return out;
}

UsageSummary summarize(const std::vector<TelemetryEvent>& log) {
  UsageSummary s;
  for (const auto& e : log) {
    if (e.kind == "GenerationStarted") {
      ++s.generations[e.fields.at("technique").get<std::string>()];
      ++s.uut_kinds[e.fields.at("uut_kind").get<std::string>()];
    } else if (e.kind == "GenerationFinished") {
      const std::string t = e.fields.at("technique").get<std::string>();
      if (e.fields.at("success").get<bool>()) ++s.successes[t];
      s.total_duration_ms[t] += e.fields.at("duration_ms").get<std::int64_t>();
    } else if (e.kind == "TestsIntegrated") {
      s.integrated_tests[e.fields.at("technique").get<std::string>()] += e.fields.at("count").get<std::size_t>();
    } else if (e.kind == "TestModified") {
      ++s.modified_regions[e.fields.at("region").get<std::string>()];
    } else if (e.kind == "LlmFeedbackSent") {
      ++s.feedback_requests;
    } else if (e.kind == "TestRun") {
      ++s.test_runs;
      if (e.fields.at("passed").get<bool>()) ++s.passed_runs;
    }
  }
  return s;
}

}  // namespace forgespark::session
