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

#ifndef FORGESPARK_SESSION_TELEMETRY_HPP_
#define FORGESPARK_SESSION_TELEMETRY_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace forgespark::session {

inline constexpr const char* kTelemetryFile = "telemetry.ndjson";

enum class ModifiedRegion { Data, Calls, Assertions };

const char* to_string(ModifiedRegion region);

// One log record: {"ts": ..., "kind": ..., event fields}. Fields never carry
// source code or anything identifying the user.
struct TelemetryEvent {
  std::string timestamp;
  std::string kind;
  nlohmann::json fields = nlohmann::json::object();

  nlohmann::json to_json() const;
  static TelemetryEvent from_json(const nlohmann::json& record);
};

namespace events {
TelemetryEvent generation_started(std::string_view technique, std::string_view uut_kind);
TelemetryEvent generation_finished(std::string_view technique, bool success, std::int64_t duration_ms,
                                   std::size_t tests_count);
TelemetryEvent test_modified(ModifiedRegion region);
TelemetryEvent llm_feedback_sent();
TelemetryEvent tests_integrated(std::size_t count, std::string_view technique);
TelemetryEvent test_run(bool passed);
}  // namespace events

// Changed lines between two versions of a test, bucketed: a line with
// `assert`/`expect_error` is an assertion change, else a line calling one of
// `project_functions` is a call change, else a data change.
std::set<ModifiedRegion> classify_modification(std::string_view before, std::string_view after,
                                               const std::set<std::string>& project_functions);

using Clock = std::function<std::string()>;

// ISO-8601 UTC with milliseconds.
std::string utc_now();

// Buffers events and appends them to `<dir>/telemetry.ndjson` on flush.
class TelemetryLog {
 public:
  TelemetryLog(std::filesystem::path directory, bool enabled, Clock clock = utc_now);

  void record(TelemetryEvent event);
  // Appends pending events in one write. IO problems are logged and the
  // events dropped; never throws.
  void flush();

  // Every event recorded so far, flushed or not.
  std::vector<TelemetryEvent> history() const;
  std::filesystem::path path() const { return directory_ / kTelemetryFile; }
  bool enabled() const { return enabled_; }

 private:
  std::filesystem::path directory_;
  bool enabled_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::vector<TelemetryEvent> pending_;
  std::vector<TelemetryEvent> history_;
};

std::vector<TelemetryEvent> read_log(const std::filesystem::path& file);

// Local answers to the usage questions.
struct UsageSummary {
  std::map<std::string, std::size_t> generations;            // technique -> runs
  std::map<std::string, std::size_t> uut_kinds;              // file/function/line -> runs
  std::map<std::string, std::size_t> successes;              // technique -> successful runs
  std::map<std::string, std::int64_t> total_duration_ms;     // technique -> summed duration
  std::map<std::string, std::size_t> integrated_tests;       // technique -> tests applied
  std::map<std::string, std::size_t> modified_regions;       // data/calls/assertions -> edits
  std::size_t feedback_requests = 0;
  std::size_t test_runs = 0;
  std::size_t passed_runs = 0;
};

UsageSummary summarize(const std::vector<TelemetryEvent>& log);

}  // namespace forgespark::session

#endif  // FORGESPARK_SESSION_TELEMETRY_HPP_
