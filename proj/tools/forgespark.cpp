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

#include <signal.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "forgespark/coverage/report.hpp"
#include "forgespark/session/server.hpp"
#include "forgespark/session/session.hpp"

namespace {

namespace fs = std::filesystem;
namespace session = forgespark::session;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitServe = 1;
constexpr int kExitError = 2;
constexpr int kExitFallback = 3;

int fail(int code, std::string message) {
  while (!message.empty() && message.back() == '\n') message.pop_back();
  for (auto pos = message.find('\n'); pos != std::string::npos; pos = message.find('\n', pos)) {
    message.replace(pos, 1, "; ");
  }
  std::cerr << "forgespark: " << message << "\n";
  return code;
}

// "llm.base_url" -> "--llm-base-url".
std::string flag_for(const std::string& key) {
  std::string out = "--" + key;
  for (char& c : out) {
    if (c == '.' || c == '_') c = '-';
  }
  return out;
}

const std::map<std::string, std::string> kAliases = {
    {"--seed", "sbst.seed"},
    {"--max-repair-iters", "llm.max_iterations"},
    {"--token-budget", "llm.token_budget"},
    {"--input-depth", "llm.input_depth"},
    {"--poly-depth", "llm.polymorphism_depth"},
    {"--port", "service.port"},
};

const std::set<std::string> kPathKeys = {"llm.scripted_dir", "llm.prompt_template_path"};

// Config flags shared by the subcommands; values are applied last.
struct ConfigFlags {
  std::map<std::string, std::string> values;  // config key -> raw flag value

  void attach(CLI::App& app) {
    for (const auto& key : session::config_keys()) {
      app.add_option_function<std::string>(
          flag_for(key), [this, key](const std::string& v) { values[key] = v; }, "config key " + key);
    }
    for (const auto& [flag, key] : kAliases) {
      app.add_option_function<std::string>(
          flag, [this, key = key](const std::string& v) { values[key] = v; }, "same as " + flag_for(key));
    }
  }

  // forgespark.json < FORGESPARK_* environment < flags.
  session::ForgeConfig resolve(const fs::path& project) const {
    session::ForgeConfig config = session::load_config(project);
    session::apply_environment(config, session::process_environment());
    for (const auto& [key, value] : values) {
      // Paths on the command line are relative to the working directory.
      if (kPathKeys.count(key) && !value.empty() && fs::path(value).is_relative()) {
        session::set_key(config, key, fs::absolute(value).string());
      } else {
        session::set_key(config, key, value);
      }
    }
    return config;
  }
};

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string id;
  while (std::getline(in, id, ',')) {
    if (!id.empty()) out.push_back(id);
  }
  return out;
}

struct GenerateArgs {
  std::string project, file, function, technique = "sbst", out;
  int line = 0;
};

int run_generate(const GenerateArgs& args, const ConfigFlags& flags) {
  if (!fs::is_directory(args.project)) return fail(kExitError, "project directory not found: " + args.project);
  auto technique = session::parse_technique(args.technique);
  if (!technique) return fail(kExitError, "technique must be 'sbst' or 'llm'");
  session::ServiceOptions options;
  options.project_root = args.project;
  options.config = flags.resolve(args.project);
  options.persist = false;
  session::SessionService service(std::move(options));

  session::UnitSpec unit{args.file, std::nullopt, std::nullopt};
  if (!args.function.empty()) unit.function = args.function;
  if (args.line != 0) unit.line = args.line;
  std::string id = service.create_session(unit, *technique, json::object(), true);
  session::SessionInfo info = service.info(id);
  if (info.phase != session::Phase::Ready) {
    return fail(info.failure == session::Failure::Fallback ? kExitFallback : kExitError, info.error);
  }
  std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
  out << service.report(id).dump(2) << "\n";
  if (!out.flush()) return fail(kExitError, "cannot write " + args.out);
  std::cerr << "forgespark: " << info.test_count << " tests for " << unit.describe() << " written to " << args.out
            << "\n";
  return kExitOk;
}

struct ApplyArgs {
  std::string project, report, select, dest_existing;
  std::vector<std::string> dest_new;
};

int run_apply(const ApplyArgs& args, const ConfigFlags& flags) {
  if (!fs::is_directory(args.project)) return fail(kExitError, "project directory not found: " + args.project);
  std::ifstream in(args.report);
  if (!in) return fail(kExitError, "cannot read report " + args.report);
  json document = json::parse(in, nullptr, false);
  if (document.is_discarded()) return fail(kExitError, "report is not JSON: " + args.report);
  std::vector<forgespark::coverage::ReportTest> tests;
  try {
    tests = forgespark::coverage::report_tests(document);
  } catch (const std::exception& e) {
    return fail(kExitError, e.what());
  }
  std::vector<std::string> ids = split_ids(args.select);
  if (args.select.empty()) {
    for (const auto& t : tests) ids.push_back(t.id);
  }
  if (ids.empty()) return fail(kExitError, "no tests selected");
  std::vector<std::string> codes;
  for (const auto& id : ids) {
    auto it = std::find_if(tests.begin(), tests.end(), [&](const auto& t) { return t.id == id; });
    if (it == tests.end()) return fail(kExitError, "unknown test id '" + id + "'");
    codes.push_back(it->code);
  }
  session::ApplyDestination dest;
  if (!args.dest_existing.empty()) {
    dest = session::ExistingFile{args.dest_existing};
  } else {
    dest = session::NewFile{args.dest_new.at(0), args.dest_new.at(1)};
  }
  session::ApplyResult result;
  try {
    result = session::apply_to_suite(args.project, codes, dest);
  } catch (const session::ApplyError& e) {
    return fail(kExitError, e.what());
  }
  session::ForgeConfig config = flags.resolve(args.project);
  session::TelemetryLog log(fs::path(args.project) / session::kStateDir, config.telemetry_enabled);
  log.record(session::events::tests_integrated(codes.size(), document.value("technique", "")));
  log.flush();
  std::cerr << "forgespark: " << codes.size() << " tests applied to " << result.written.string() << "\n";
  return kExitOk;
}

struct ServeArgs {
  std::string project, ui = FORGESPARK_DEFAULT_UI_DIR;
};

int run_serve(const ServeArgs& args, const ConfigFlags& flags) {
  if (!fs::is_directory(args.project)) return fail(kExitError, "project directory not found: " + args.project);
  session::ServiceOptions options;
  options.project_root = args.project;
  options.config = flags.resolve(args.project);
  const int port = options.config.port;

  // Block termination signals before any thread starts so only sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  session::SessionService service(std::move(options));
  session::HttpServer server(service, args.ui);
  if (!server.bind(port)) return fail(kExitServe, "port " + std::to_string(port) + " is in use");
  std::cout << "http://127.0.0.1:" << server.port() << "/" << std::endl;
  std::thread listener([&] { server.run(); });
  int received = 0;
  sigwait(&stop_signals, &received);
  server.stop();
  listener.join();
  std::cerr << "forgespark: stopped\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ForgeSpark unit test generation for MiniLang projects"};
  app.require_subcommand(1);

  GenerateArgs gen;
  ConfigFlags gen_flags;
  CLI::App* generate = app.add_subcommand("generate", "Generate tests for a unit and write the coverage report");
  generate->add_option("--project", gen.project, "Project directory")->required();
  generate->add_option("--file", gen.file, "Source file of the unit, relative to the project")->required();
  generate->add_option("--function", gen.function, "Function under test");
  generate->add_option("--line", gen.line, "Line under test")->check(CLI::PositiveNumber);
  generate->add_option("--technique", gen.technique, "sbst or llm")->check(CLI::IsMember({"sbst", "llm"}));
  generate->add_option("--out", gen.out, "Report file")->required();
  gen_flags.attach(*generate);

  ServeArgs serve_args;
  ConfigFlags serve_flags;
  CLI::App* serve = app.add_subcommand("serve", "Serve the HTTP API and the review UI");
  serve->add_option("--project", serve_args.project, "Project directory")->required();
  serve->add_option("--ui", serve_args.ui, "Directory holding the UI bundle");
  serve_flags.attach(*serve);

  ApplyArgs apply_args;
  ConfigFlags apply_flags;
  CLI::App* apply = app.add_subcommand("apply", "Write tests from a report into the project");
  apply->add_option("--project", apply_args.project, "Project directory")->required();
  apply->add_option("--report", apply_args.report, "Report written by generate")->required();
  apply->add_option("--select", apply_args.select, "Comma-separated test ids (default: all)");
  auto* dest_new = apply->add_option("--dest-new", apply_args.dest_new, "New file: DIR NAME")->expected(2);
  auto* dest_existing = apply->add_option("--dest-existing", apply_args.dest_existing, "Existing project file");
  dest_new->excludes(dest_existing);
  apply_flags.attach(*apply);

  try {
    app.parse(argc, argv);
    if (apply->parsed() && apply_args.dest_new.empty() && apply_args.dest_existing.empty()) {
      throw CLI::ValidationError("apply needs --dest-new DIR NAME or --dest-existing PATH");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitError, e.what());
  }

  try {
    if (generate->parsed()) return run_generate(gen, gen_flags);
    if (serve->parsed()) return run_serve(serve_args, serve_flags);
    return run_apply(apply_args, apply_flags);
  } catch (const session::ConfigError& e) {
    return fail(kExitError, std::string("configuration: ") + e.what());
  } catch (const session::ServiceError& e) {
    return fail(kExitError, e.what());
  } catch (const std::exception& e) {
    return fail(kExitError, e.what());
  }
}
