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

#ifndef FORGESPARK_SESSION_SESSION_HPP_
#define FORGESPARK_SESSION_SESSION_HPP_

#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "forgespark/coverage/coverage.hpp"
#include "forgespark/llm/provider.hpp"
#include "forgespark/session/apply.hpp"
#include "forgespark/session/config.hpp"
#include "forgespark/session/project.hpp"
#include "forgespark/session/telemetry.hpp"

namespace forgespark::session {

enum class Technique { Sbst, Llm };
const char* to_string(Technique technique);
std::optional<Technique> parse_technique(std::string_view text);

// What to generate tests for: a file, a function in it, or a line.
struct UnitSpec {
  std::string file;
  std::optional<std::string> function;
  std::optional<int> line;

  const char* kind() const;  // "file", "function" or "line"
  // "calc.ml", "calc.ml::abs", "calc.ml::abs:12", "calc.ml:12".
  std::string describe() const;
};

enum class Phase { Building, Generating, Ready, Error };
const char* to_string(Phase phase);

// Why a session ended in Error.
enum class Failure {
  None,
  Build,       // project does not compile
  Generation,  // bad unit, search or provider failure
  Fallback,    // prompt too large or no compiling test within the iteration budget
};
const char* to_string(Failure failure);

enum class TestStatus { NotRun, Passing, Failing };
const char* to_string(TestStatus status);

enum class Liked { Neutral, Liked, Disliked };
const char* to_string(Liked liked);
std::optional<Liked> parse_liked(std::string_view text);

enum class ResetTarget { Initial, LastRun };

enum class BulkAction { SelectAll, UnselectAll, DeleteAll };
std::optional<BulkAction> parse_bulk_action(std::string_view text);

struct TestEntry {
  std::string id;
  std::string name;
  Technique origin = Technique::Sbst;
  std::string initial_code;
  std::optional<std::string> last_run_code;
  std::string current_code;
  std::vector<std::string> versions;  // initial code first, then LLM modifications
  std::size_t active_version = 0;
  TestStatus status = TestStatus::NotRun;
  std::string error;
  bool selected = true;
  Liked liked = Liked::Neutral;
};

nlohmann::json to_json(const TestEntry& entry);
TestEntry test_entry_from_json(const nlohmann::json& j);

struct SessionInfo {
  std::string id;
  std::filesystem::path project_root;
  UnitSpec unit;
  Technique technique = Technique::Sbst;
  Phase phase = Phase::Building;
  Failure failure = Failure::None;
  std::string error;
  double progress = 0;
  std::size_t test_count = 0;
};

nlohmann::json to_json(const SessionInfo& info);

// Errors surfaced to API callers.
class ServiceError : public std::runtime_error {
 public:
  enum class Code { NotFound, WrongPhase, InvalidRequest, Failed };
  ServiceError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }
  const char* code_name() const;

 private:
  Code code_;
};

using ProviderFactory = std::function<std::unique_ptr<llm::Provider>(const ForgeConfig& config)>;

// openai -> OpenAiProvider with the token read from llm.token_env;
// scripted -> ScriptedProvider over llm.scripted_dir (relative to `root`).
ProviderFactory default_provider_factory(std::filesystem::path root, EnvLookup env = process_environment());

struct ServiceOptions {
  std::filesystem::path project_root;  // default project for new sessions
  ForgeConfig config;                  // base config; sessions may override keys
  ProviderFactory providers;           // default_provider_factory(project_root) when empty
  Clock clock = utc_now;
  bool persist = true;                 // write and reload .forgespark/sessions snapshots
};

class SessionService {
 public:
  explicit SessionService(ServiceOptions options);
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // Validates the request, then builds and generates on a background worker
  // (or inline when `wait`). Throws ServiceError(InvalidRequest) on a
  // malformed unit, unknown technique, bad override or unreadable project.
  std::string create_session(const UnitSpec& unit, Technique technique,
                             const nlohmann::json& overrides = nlohmann::json::object(), bool wait = false,
                             const std::optional<std::filesystem::path>& project_root = std::nullopt);

  std::vector<SessionInfo> list() const;
  SessionInfo info(const std::string& id) const;
  // Blocks until the session is Ready or Error.
  SessionInfo wait(const std::string& id) const;

  std::vector<TestEntry> tests(const std::string& id) const;
  TestEntry test(const std::string& id, const std::string& tid) const;

  TestEntry run_test(const std::string& id, const std::string& tid,
                     const std::optional<std::string>& code = std::nullopt);
  TestEntry reset_test(const std::string& id, const std::string& tid, ResetTarget target);
  // Returns the index of the new version.
  std::size_t llm_feedback(const std::string& id, const std::string& tid, const std::string& instruction);
  TestEntry set_active_version(const std::string& id, const std::string& tid, std::size_t index);
  TestEntry set_flags(const std::string& id, const std::string& tid, std::optional<bool> selected,
                      std::optional<Liked> liked);
  void delete_test(const std::string& id, const std::string& tid);
  void bulk(const std::string& id, BulkAction action);

  // Metrics of the selected tests, or of `selection` when given.
  coverage::Totals totals(const std::string& id,
                          const std::optional<std::set<std::string>>& selection = std::nullopt) const;
  nlohmann::json lines(const std::string& id) const;
  // Unit lines the test covered in its last execution.
  std::vector<int> covered_lines(const std::string& id, const std::string& tid) const;
  // The coverage report document for the current tests.
  nlohmann::json report(const std::string& id) const;

  // Applies `selection` (default: the selected tests) to the destination.
  ApplyResult apply(const std::string& id, const std::optional<std::vector<std::string>>& selection,
                    const ApplyDestination& destination);

  TelemetryLog& telemetry() { return telemetry_; }
  const ServiceOptions& options() const { return options_; }

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  void generate(const std::shared_ptr<Session>& session);
  void refresh_coverage(Session& session);
  void persist(const Session& session);
  void restore();
  void emit(TelemetryEvent event);

  ServiceOptions options_;
  TelemetryLog telemetry_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_id_ = 1;
  std::vector<std::thread> workers_;
};

}  // namespace forgespark::session

#endif  // FORGESPARK_SESSION_SESSION_HPP_
