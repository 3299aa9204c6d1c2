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

#include "forgespark/session/session.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "forgespark/coverage/report.hpp"
#include "forgespark/lang/merge.hpp"
#include "forgespark/lang/parser.hpp"
#include "forgespark/llm/candidates.hpp"
#include "forgespark/llm/repair.hpp"
#include "forgespark/sbst/search.hpp"

namespace forgespark::session {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Technique technique) { return technique == Technique::Sbst ? "sbst" : "llm"; }

std::optional<Technique> parse_technique(std::string_view text) {
  if (text == "sbst") return Technique::Sbst;
  if (text == "llm") return Technique::Llm;
  return std::nullopt;
}

const char* UnitSpec::kind() const {
  if (line) return "line";
  if (function) return "function";
  return "file";
}

std::string UnitSpec::describe() const {
  std::string out = file;
  if (function) out += "::" + *function;
  if (line) out += ":" + std::to_string(*line);
  return out;
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Building:
      return "Building";
    case Phase::Generating:
      return "Generating";
    case Phase::Ready:
      return "Ready";
    case Phase::Error:
      return "Error";
  }
  return "?";
}

const char* to_string(Failure failure) {
  switch (failure) {
    case Failure::None:
      return "none";
    case Failure::Build:
      return "build";
    case Failure::Generation:
      return "generation";
    case Failure::Fallback:
      return "fallback";
  }
  return "?";
}

const char* to_string(TestStatus status) {
  switch (status) {
    case TestStatus::NotRun:
      return "NotRun";
    case TestStatus::Passing:
      return "Passing";
    case TestStatus::Failing:
      return "Failing";
  }
  return "?";
}

const char* to_string(Liked liked) {
  switch (liked) {
    case Liked::Neutral:
      return "neutral";
    case Liked::Liked:
      return "liked";
    case Liked::Disliked:
      return "disliked";
  }
  return "?";
}

std::optional<Liked> parse_liked(std::string_view text) {
  if (text == "neutral") return Liked::Neutral;
  if (text == "liked") return Liked::Liked;
  if (text == "disliked") return Liked::Disliked;
  return std::nullopt;
}

std::optional<BulkAction> parse_bulk_action(std::string_view text) {
  if (text == "select_all") return BulkAction::SelectAll;
  if (text == "unselect_all") return BulkAction::UnselectAll;
  if (text == "delete_all") return BulkAction::DeleteAll;
  return std::nullopt;
}

const char* ServiceError::code_name() const {
  switch (code_) {
    case Code::NotFound:
      return "not_found";
    case Code::WrongPhase:
      return "wrong_phase";
    case Code::InvalidRequest:
      return "invalid_request";
    case Code::Failed:
      return "failed";
  }
  return "?";
}

json to_json(const TestEntry& e) {
  return json{{"id", e.id},
              {"name", e.name},
              {"origin", to_string(e.origin)},
              {"initial_code", e.initial_code},
              {"last_run_code", e.last_run_code ? json(*e.last_run_code) : json(nullptr)},
              {"current_code", e.current_code},
              {"versions", e.versions},
              {"active_version", e.active_version},
              {"status", to_string(e.status)},
              {"error", e.error},
              {"selected", e.selected},
              {"liked", to_string(e.liked)}};
}

TestEntry test_entry_from_json(const json& j) {
  TestEntry e;
  e.id = j.at("id").get<std::string>();
  e.name = j.at("name").get<std::string>();
  e.origin = parse_technique(j.at("origin").get<std::string>()).value_or(Technique::Sbst);
  e.initial_code = j.at("initial_code").get<std::string>();
  if (!j.at("last_run_code").is_null()) e.last_run_code = j.at("last_run_code").get<std::string>();
  e.current_code = j.at("current_code").get<std::string>();
  e.versions = j.at("versions").get<std::vector<std::string>>();
  e.active_version = j.at("active_version").get<std::size_t>();
  const std::string status = j.at("status").get<std::string>();
  e.status = status == "Passing" ? TestStatus::Passing : status == "Failing" ? TestStatus::Failing : TestStatus::NotRun;
  e.error = j.at("error").get<std::string>();
  e.selected = j.at("selected").get<bool>();
  e.liked = parse_liked(j.at("liked").get<std::string>()).value_or(Liked::Neutral);
  return e;
}

json to_json(const SessionInfo& info) {
  return json{{"id", info.id},
              {"project", info.project_root.string()},
              {"uut", info.unit.describe()},
              {"uut_kind", info.unit.kind()},
              {"technique", to_string(info.technique)},
              {"phase", to_string(info.phase)},
              {"failure", to_string(info.failure)},
              {"error", info.error},
              {"progress", info.progress},
              {"tests", info.test_count}};
}

ProviderFactory default_provider_factory(fs::path root, EnvLookup env) {
  return [root = std::move(root), env = std::move(env)](const ForgeConfig& config) -> std::unique_ptr<llm::Provider> {
    if (config.llm.provider == "scripted") {
      if (config.llm.scripted_dir.empty()) throw llm::ProviderError("llm.scripted_dir is not set");
      fs::path dir = config.llm.scripted_dir;
      if (dir.is_relative()) dir = root / dir;
      return std::make_unique<llm::ScriptedProvider>(llm::ScriptedProvider::read_script(dir));
    }
    llm::WireConfig wire;
    wire.base_url = config.llm.base_url;
    wire.model = config.llm.model;
    if (auto token = env(config.llm.token_env)) wire.token = *token;
    return std::make_unique<llm::OpenAiProvider>(wire);
  };
}

struct SessionService::Session {
  mutable std::mutex mutex;
  mutable std::condition_variable changed;

  std::string id;
  fs::path root;
  UnitSpec unit;
  Technique technique = Technique::Sbst;
  ForgeConfig config;

  Phase phase = Phase::Building;
  Failure failure = Failure::None;
  std::string error;
  double progress = 0;

  std::optional<Project> project;
  std::vector<std::string> uut_functions;
  std::vector<TestEntry> tests;
  std::optional<coverage::CoverageReport> report;
  std::unique_ptr<llm::Provider> provider;
  std::size_t next_test = 1;

  SessionInfo info() const {
    return SessionInfo{id, root, unit, technique, phase, failure, error, progress, tests.size()};
  }

  TestEntry& entry(const std::string& tid) {
    auto it = std::find_if(tests.begin(), tests.end(), [&](const TestEntry& e) { return e.id == tid; });
    if (it == tests.end()) throw ServiceError(ServiceError::Code::NotFound, "unknown test '" + tid + "'");
    return *it;
  }

  void require_ready() const {
    if (phase != Phase::Ready) {
      throw ServiceError(ServiceError::Code::WrongPhase, "session " + id + " is " + to_string(phase));
    }
  }

  std::set<std::string> selected_ids() const {
    std::set<std::string> out;
    for (const auto& t : tests) {
      if (t.selected) out.insert(t.id);
    }
    return out;
  }

  llm::RepairLoopConfig repair_config() const {
    llm::RepairLoopConfig c;
    c.max_iterations = config.llm.max_iterations;
    c.token_budget = config.llm.token_budget;
    c.model = config.llm.model;
    return c;
  }
};

namespace {

// The resolved unit: functions whose lines are measured and the target line.
struct ResolvedUnit {
  int file = 0;
  std::vector<std::string> functions;
  std::optional<int> line;
  llm::UnitRef ref;
};

class UnitProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ResolvedUnit resolve_unit(const Project& project, const UnitSpec& unit) {
  const lang::TypedProgram& program = *project.typed;
  ResolvedUnit out;
  auto index = project.file_index(unit.file);
  if (!index) throw UnitProblem("unknown file '" + unit.file + "'");
  out.file = *index;
  const lang::FunctionDecl* fn = nullptr;
  if (unit.function) {
    fn = program.function_named(*unit.function);
    if (fn == nullptr || fn->is_test || fn->file != out.file) {
      throw UnitProblem("unknown function '" + *unit.function + "' in " + unit.file);
    }
  }
  if (unit.line) {
    if (fn == nullptr) fn = program.function_at_line(*unit.line, out.file);
    if (fn == nullptr || fn->is_test || *unit.line < fn->first_line || *unit.line > fn->last_line) {
      throw UnitProblem("line not in unit");
    }
    out.line = unit.line;
    out.functions = {fn->name};
    out.ref = llm::UnitRef::line_unit(fn->name, *unit.line);
    return out;
  }
  if (fn != nullptr) {
    out.functions = {fn->name};
    out.ref = llm::UnitRef::function_unit(fn->name);
    return out;
  }
  for (const auto& f : project.program.functions) {
    if (f.file == out.file) out.functions.push_back(f.name);
  }
  if (out.functions.empty()) throw UnitProblem("no functions in " + unit.file);
  out.ref = llm::UnitRef::whole_file(out.file);
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Name of the single test declared in `code`.
std::string test_name_of(const std::string& code) {
  lang::Program p = lang::parse(code, "<test>");
  if (p.tests.size() != 1) throw lang::ParseError(1, 1, "expected exactly one test function");
  return p.tests.front().name;
}

std::set<std::string> project_function_names(const Project& project) {
  std::set<std::string> out;
  for (const auto& f : project.program.functions) out.insert(f.name);
  return out;
}

}  // namespace

SessionService::SessionService(ServiceOptions options)
    : options_(std::move(options)),
      telemetry_(options_.project_root / kStateDir, options_.config.telemetry_enabled, options_.clock) {
  if (!options_.providers) options_.providers = default_provider_factory(options_.project_root);
  if (options_.persist) restore();
}

SessionService::~SessionService() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mutex_);
    workers.swap(workers_);
  }
  for (auto& w : workers) {
    if (w.joinable()) w.join();
  }
  telemetry_.flush();
}

void SessionService::emit(TelemetryEvent event) { telemetry_.record(std::move(event)); }

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(ServiceError::Code::NotFound, "unknown session '" + id + "'");
  return it->second;
}

std::string SessionService::create_session(const UnitSpec& unit, Technique technique, const json& overrides,
                                           bool wait, const std::optional<fs::path>& project_root) {
  if (unit.file.empty()) throw ServiceError(ServiceError::Code::InvalidRequest, "unit file is required");
  if (unit.line && *unit.line <= 0) throw ServiceError(ServiceError::Code::InvalidRequest, "line must be positive");
  if (unit.function && unit.function->empty()) {
    throw ServiceError(ServiceError::Code::InvalidRequest, "function name is empty");
  }
  auto session = std::make_shared<Session>();
  session->root = project_root.value_or(options_.project_root);
  std::error_code ec;
  if (!fs::is_directory(session->root, ec)) {
    throw ServiceError(ServiceError::Code::InvalidRequest, "project directory not found: " + session->root.string());
  }
  session->unit = unit;
  session->technique = technique;
  session->config = options_.config;
  try {
    if (project_root && *project_root != options_.project_root) session->config = load_config(*project_root);
    apply_json(session->config, overrides.is_null() ? json::object() : overrides);
  } catch (const ConfigError& e) {
    throw ServiceError(ServiceError::Code::InvalidRequest, e.what());
  }
  {
    std::lock_guard lock(mutex_);
    session->id = "s" + std::to_string(next_id_++);
    sessions_.emplace(session->id, session);
  }
  if (wait) {
    generate(session);
  } else {
    std::lock_guard lock(mutex_);
    workers_.emplace_back([this, session] { generate(session); });
  }
  return session->id;
}

void SessionService::generate(const std::shared_ptr<Session>& session) {
  const auto started = std::chrono::steady_clock::now();
  emit(events::generation_started(to_string(session->technique), session->unit.kind()));

  auto finish = [&](Phase phase, Failure failure, std::string error) {
    {
      std::lock_guard lock(session->mutex);
      session->phase = phase;
      session->failure = failure;
      session->error = std::move(error);
      session->progress = 1;
    }
    session->changed.notify_all();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    emit(events::generation_finished(to_string(session->technique), phase == Phase::Ready, ms.count(),
                                     session->tests.size()));
    telemetry_.flush();
    if (phase == Phase::Ready) persist(*session);
  };

  Project project;
  try {
    project = load_project(session->root);
  } catch (const ProjectError& e) {
    return finish(Phase::Error, Failure::Build, e.what());
  }
  if (!project.ok()) return finish(Phase::Error, Failure::Build, "project does not compile: " + project.error);

  ResolvedUnit unit;
  try {
    unit = resolve_unit(project, session->unit);
  } catch (const UnitProblem& e) {
    return finish(Phase::Error, Failure::Generation, e.what());
  }
  {
    std::lock_guard lock(session->mutex);
    session->phase = Phase::Generating;
    session->project = project;
    session->uut_functions = unit.functions;
  }
  session->changed.notify_all();

  const ForgeConfig& config = session->config;
  std::vector<TestEntry> entries;
  auto add_entry = [&](std::string name, std::string code) {
    TestEntry e;
    e.id = "t" + std::to_string(session->next_test++);
    e.name = std::move(name);
    e.origin = session->technique;
    e.initial_code = code;
    e.current_code = code;
    e.versions = {std::move(code)};
    entries.push_back(std::move(e));
  };

  if (session->technique == Technique::Sbst) {
    sbst::SearchConfig search;
    search.population_size = config.sbst.population;
    search.max_evaluations = config.sbst.max_evaluations;
    search.rng_seed = config.sbst.seed;
    search.step_budget = config.step_budget;
    if (unit.line) {
      search.mode = sbst::SearchMode::SingleLine;
      search.target_line = *unit.line;
    }
    const double parts = static_cast<double>(unit.functions.size());
    for (std::size_t i = 0; i < unit.functions.size(); ++i) {
      auto observer = [&](const sbst::GenerationSnapshot& s) {
        std::lock_guard lock(session->mutex);
        session->progress = (static_cast<double>(i) + std::min(1.0, static_cast<double>(s.evaluations) /
                                                                            static_cast<double>(search.max_evaluations))) /
                            parts;
      };
      try {
        sbst::SearchResult result = sbst::run_search(*project.typed, unit.functions[i], search, observer);
        for (auto& t : result.tests) add_entry(t.name, t.code);
      } catch (const std::exception& e) {
        return finish(Phase::Error, Failure::Generation, e.what());
      }
    }
  } else {
    try {
      if (!session->provider) session->provider = options_.providers(config);
      llm::PromptSettings settings;
      if (!config.llm.prompt_template_path.empty()) {
        fs::path path = config.llm.prompt_template_path;
        if (path.is_relative()) path = session->root / path;
        settings.template_text = read_text(path);
      }
      llm::FeedbackOutcome outcome =
          llm::repair_loop(*project.typed, unit.ref, {config.llm.input_depth, config.llm.polymorphism_depth},
                           session->repair_config(), *session->provider, settings);
      if (outcome.terminal == llm::Terminal::BudgetExhaustedWithNone) {
        std::string message = outcome.message;
        if (outcome.aborted) message = *outcome.aborted + "; " + message;
        return finish(Phase::Error, Failure::Fallback, message);
      }
      for (auto& c : outcome.saved) add_entry(c.name, c.code);
    } catch (const llm::PromptTooLarge& e) {
      return finish(Phase::Error, Failure::Fallback, e.what());
    } catch (const std::exception& e) {
      return finish(Phase::Error, Failure::Generation, e.what());
    }
  }

  try {
    std::lock_guard lock(session->mutex);
    session->tests = std::move(entries);
    refresh_coverage(*session);
    for (auto& t : session->tests) {
      const coverage::TestRun& run = session->report->test(t.id);
      t.status = run.passed ? TestStatus::Passing : TestStatus::Failing;
      t.error = run.error;
    }
  } catch (const std::exception& e) {
    return finish(Phase::Error, Failure::Generation, std::string("coverage failed: ") + e.what());
  }
  finish(Phase::Ready, Failure::None, "");
}

// Runs every test's last executed code (initial code until the user runs it)
// against the project snapshot. Caller holds the session lock.
void SessionService::refresh_coverage(Session& session) {
  const Project& project = *session.project;
  lang::Program suite = project.program;
  const int file = static_cast<int>(suite.sources.size());
  suite.sources.push_back("<generated>");
  std::vector<coverage::TestSpec> specs;
  for (const auto& t : session.tests) {
    const std::string& code = t.last_run_code ? *t.last_run_code : t.initial_code;
    lang::Program incoming = lang::parse(code, "<generated>", file);
    const std::string declared = incoming.tests.at(0).name;
    lang::MergeOutcome merged = lang::merge_into(suite, std::move(incoming), file);
    auto renamed = merged.renamed.find(declared);
    specs.push_back({t.id, renamed == merged.renamed.end() ? declared : renamed->second});
  }
  lang::TypecheckResult checked = lang::typecheck(std::move(suite));
  if (!checked.ok()) throw std::runtime_error("generated tests do not compile together: " + checked.error_text());
  session.report = coverage::analyze(*checked.typed, session.uut_functions, specs, true, session.config.step_budget);
}

std::vector<SessionInfo> SessionService::list() const {
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [_, s] : sessions_) all.push_back(s);
  }
  std::vector<SessionInfo> out;
  for (const auto& s : all) {
    std::lock_guard lock(s->mutex);
    out.push_back(s->info());
  }
  return out;
}

SessionInfo SessionService::info(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->info();
}

SessionInfo SessionService::wait(const std::string& id) const {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  s->changed.wait(lock, [&] { return s->phase == Phase::Ready || s->phase == Phase::Error; });
  return s->info();
}

std::vector<TestEntry> SessionService::tests(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->tests;
}

TestEntry SessionService::test(const std::string& id, const std::string& tid) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->entry(tid);
}

TestEntry SessionService::run_test(const std::string& id, const std::string& tid, const std::optional<std::string>& code) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  TestEntry& e = s->entry(tid);
  if (code && *code != e.current_code) {
    for (ModifiedRegion r : classify_modification(e.current_code, *code, project_function_names(*s->project))) {
      emit(events::test_modified(r));
    }
    e.current_code = *code;
  }

  llm::TestCandidate candidate = llm::check_candidate(*s->project->typed, {e.name, e.current_code, {}});
  std::string name;
  if (candidate.status.compiles()) {
    try {
      name = test_name_of(e.current_code);
    } catch (const lang::ParseError& err) {
      candidate.status.kind = llm::CompileStatus::Kind::Fails;
      candidate.status.errors = {"line " + std::to_string(err.line()) + ": " + err.detail()};
    }
  }
  if (!candidate.status.compiles()) {
    e.status = TestStatus::Failing;
    e.error.clear();
    for (const auto& msg : candidate.status.errors) e.error += (e.error.empty() ? "" : "\n") + msg;
    telemetry_.flush();
    persist(*s);
    return e;
  }

  std::optional<std::string> previous = e.last_run_code;
  e.last_run_code = e.current_code;
  e.name = name;
  try {
    refresh_coverage(*s);
  } catch (const std::exception& err) {
    e.last_run_code = previous;
    refresh_coverage(*s);
    e.status = TestStatus::Failing;
    e.error = err.what();
    return e;
  }
  const coverage::TestRun& run = s->report->test(tid);
  e.status = run.passed ? TestStatus::Passing : TestStatus::Failing;
  e.error = run.error;
  emit(events::test_run(run.passed));
  telemetry_.flush();
  persist(*s);
  return e;
}

TestEntry SessionService::reset_test(const std::string& id, const std::string& tid, ResetTarget target) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  TestEntry& e = s->entry(tid);
  if (target == ResetTarget::Initial) {
    e.current_code = e.initial_code;
  } else {
    if (!e.last_run_code) throw ServiceError(ServiceError::Code::InvalidRequest, "test " + tid + " has not been run");
    e.current_code = *e.last_run_code;
  }
  e.status = TestStatus::NotRun;
  e.error.clear();
  persist(*s);
  return e;
}

std::size_t SessionService::llm_feedback(const std::string& id, const std::string& tid, const std::string& instruction) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  TestEntry& e = s->entry(tid);
  if (instruction.empty()) throw ServiceError(ServiceError::Code::InvalidRequest, "instruction is empty");
  try {
    if (!s->provider) s->provider = options_.providers(s->config);
  } catch (const std::exception& err) {
    throw ServiceError(ServiceError::Code::Failed, std::string("LLM provider not configured: ") + err.what());
  }
  llm::TestCandidate updated;
  try {
    updated = llm::modification_request(*s->project->typed, {e.name, e.current_code, {}}, instruction, *s->provider,
                                        s->repair_config());
  } catch (const std::exception& err) {
    emit(events::llm_feedback_sent());
    telemetry_.flush();
    throw ServiceError(ServiceError::Code::Failed, err.what());
  }
  emit(events::llm_feedback_sent());
  telemetry_.flush();
  e.versions.push_back(updated.code);
  e.active_version = e.versions.size() - 1;
  e.current_code = updated.code;
  e.status = TestStatus::NotRun;
  e.error.clear();
  persist(*s);
  return e.active_version;
}

TestEntry SessionService::set_active_version(const std::string& id, const std::string& tid, std::size_t index) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  TestEntry& e = s->entry(tid);
  if (index >= e.versions.size()) {
    throw ServiceError(ServiceError::Code::InvalidRequest, "test " + tid + " has no version " + std::to_string(index));
  }
  e.active_version = index;
  e.current_code = e.versions[index];
  e.status = TestStatus::NotRun;
  e.error.clear();
  persist(*s);
  return e;
}

TestEntry SessionService::set_flags(const std::string& id, const std::string& tid, std::optional<bool> selected,
                                    std::optional<Liked> liked) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  TestEntry& e = s->entry(tid);
  if (selected) e.selected = *selected;
  if (liked) e.liked = *liked;
  persist(*s);
  return e;
}

void SessionService::delete_test(const std::string& id, const std::string& tid) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  s->entry(tid);
  std::erase_if(s->tests, [&](const TestEntry& e) { return e.id == tid; });
  refresh_coverage(*s);
  persist(*s);
}

void SessionService::bulk(const std::string& id, BulkAction action) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  switch (action) {
    case BulkAction::SelectAll:
    case BulkAction::UnselectAll:
      for (auto& t : s->tests) t.selected = action == BulkAction::SelectAll;
      break;
    case BulkAction::DeleteAll:
      s->tests.clear();
      refresh_coverage(*s);
      break;
  }
  persist(*s);
}

coverage::Totals SessionService::totals(const std::string& id, const std::optional<std::set<std::string>>& selection) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  try {
    return s->report->totals(selection ? *selection : s->selected_ids());
  } catch (const coverage::UnknownTest& e) {
    throw ServiceError(ServiceError::Code::NotFound, e.what());
  }
}

json SessionService::lines(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  return coverage::lines_json(*s->report);
}

std::vector<int> SessionService::covered_lines(const std::string& id, const std::string& tid) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  s->entry(tid);
  std::set<int> out;
  for (const auto& l : s->report->test(tid).covered) {
    if (s->report->executable_lines().count(l)) out.insert(l.line);
  }
  return {out.begin(), out.end()};
}

json SessionService::report(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  std::vector<coverage::ReportTest> tests;
  for (const auto& t : s->tests) {
    tests.push_back({t.id, t.name, t.last_run_code ? *t.last_run_code : t.initial_code, to_string(t.origin)});
  }
  return coverage::report_json({s->unit.describe(), to_string(s->technique), options_.clock()}, *s->report, tests);
}

ApplyResult SessionService::apply(const std::string& id, const std::optional<std::vector<std::string>>& selection,
                                  const ApplyDestination& destination) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->require_ready();
  std::vector<std::string> ids;
  if (selection) {
    ids = *selection;
  } else {
    for (const auto& t : s->tests) {
      if (t.selected) ids.push_back(t.id);
    }
  }
  if (ids.empty()) throw ServiceError(ServiceError::Code::InvalidRequest, "no tests selected");
  std::vector<std::string> codes;
  for (const auto& tid : ids) {
    const TestEntry& e = s->entry(tid);
    auto checked = llm::check_candidate(*s->project->typed, {e.name, e.current_code, {}});
    if (!checked.status.compiles()) {
      throw ServiceError(ServiceError::Code::InvalidRequest, "test " + tid + " does not compile");
    }
    codes.push_back(e.current_code);
  }
  ApplyResult result;
  try {
    result = apply_to_suite(s->root, codes, destination);
  } catch (const ApplyError& e) {
    throw ServiceError(ServiceError::Code::Failed, e.what());
  }
  emit(events::tests_integrated(codes.size(), to_string(s->technique)));
  telemetry_.flush();
  return result;
}

void SessionService::persist(const Session& s) {
  if (!options_.persist || s.phase != Phase::Ready) return;
  json tests = json::array();
  for (const auto& t : s.tests) tests.push_back(to_json(t));
  json doc = {{"id", s.id},
              {"project", fs::absolute(s.root).string()},
              {"unit", {{"file", s.unit.file}, {"function", s.unit.function ? json(*s.unit.function) : json(nullptr)},
                        {"line", s.unit.line ? json(*s.unit.line) : json(nullptr)}}},
              {"technique", to_string(s.technique)},
              {"config", to_json(s.config)},
              {"next_test", s.next_test},
              {"tests", std::move(tests)}};
  const fs::path dir = options_.project_root / kStateDir / "sessions";
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = dir / (s.id + ".json");
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << "\n";
    if (!out) {
      spdlog::warn("cannot write session snapshot {}", path.string());
      return;
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) spdlog::warn("cannot write session snapshot {}: {}", path.string(), ec.message());
}

void SessionService::restore() {
  const fs::path dir = options_.project_root / kStateDir / "sessions";
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    try {
      json doc = json::parse(read_text(file));
      auto s = std::make_shared<Session>();
      s->id = doc.at("id").get<std::string>();
      s->root = doc.at("project").get<std::string>();
      const json& unit = doc.at("unit");
      s->unit.file = unit.at("file").get<std::string>();
      if (!unit.at("function").is_null()) s->unit.function = unit.at("function").get<std::string>();
      if (!unit.at("line").is_null()) s->unit.line = unit.at("line").get<int>();
      s->technique = parse_technique(doc.at("technique").get<std::string>()).value_or(Technique::Sbst);
      apply_json(s->config, doc.at("config"));
      s->next_test = doc.at("next_test").get<std::size_t>();
      for (const auto& t : doc.at("tests")) s->tests.push_back(test_entry_from_json(t));
      Project project = load_project(s->root);
      if (!project.ok()) throw std::runtime_error("project no longer compiles");
      s->uut_functions = resolve_unit(project, s->unit).functions;
      s->project = std::move(project);
      refresh_coverage(*s);
      s->phase = Phase::Ready;
      s->progress = 1;
      std::lock_guard lock(mutex_);
      if (s->id.size() > 1 && s->id[0] == 's') {
        next_id_ = std::max(next_id_, static_cast<std::size_t>(std::stoull(s->id.substr(1))) + 1);
      }
      sessions_[s->id] = std::move(s);
    } catch (const std::exception& e) {
      spdlog::warn("skipping session snapshot {}: {}", file.string(), e.what());
    }
  }
}

}  // namespace forgespark::session
