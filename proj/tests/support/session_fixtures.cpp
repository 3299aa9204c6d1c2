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

#include "session_fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "forgespark/session/apply.hpp"
#include "forgespark/session/project.hpp"

namespace forgespark::testing {

namespace fs = std::filesystem;

fs::path fixtures_dir() { return FORGESPARK_FIXTURES_DIR; }

TempProject::TempProject(const std::string& fixture) {
  static std::atomic<int> counter{0};
  root_ = fs::temp_directory_path() /
          ("forgespark-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(root_);
  fs::create_directories(root_);
  fs::copy(fixtures_dir() / fixture, root_, fs::copy_options::recursive);
}

TempProject::~TempProject() {
  std::error_code ec;
  fs::remove_all(root_, ec);
}

void TempProject::write(const std::string& relative, const std::string& text) const {
  fs::create_directories((root_ / relative).parent_path());
  std::ofstream(root_ / relative, std::ios::binary | std::ios::trunc) << text;
}

std::string TempProject::read(const std::string& relative) const {
  std::ifstream in(root_ / relative, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path().filename() == session::kStateDir) {
      it.disable_recursion_pending();
      continue;
    }
    const std::string rel = fs::relative(it->path(), root).generic_string();
    if (it->is_directory()) {
      out[rel + "/"] = "";
      continue;
    }
    std::ifstream in(it->path(), std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    out[rel] = bytes.str();
  }
  return out;
}

namespace {

std::string pick(std::mt19937_64& rng, const std::vector<std::string>& options) {
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

std::string random_test(std::mt19937_64& rng, bool broken) {
  std::uniform_int_distribution<int> coin(0, 1), small(-9, 9);
  const std::string name = pick(rng, {"test_abs_1", "test_abs_2", "test_clamp_1", "test_mk"});
  std::string helper;
  std::string arg = std::to_string(small(rng));
  if (coin(rng)) {
    // Two helper bodies share a name so merges both deduplicate and rename.
    const std::string offset = pick(rng, {"1", "2"});
    helper = "fn mk(a: int) -> int {\n  return a + " + offset + ";\n}\n\n";
    arg = "mk(" + arg + ")";
  }
  std::string callee = pick(rng, {"abs", "clamp"});
  std::string call = callee == "abs" ? "abs(" + arg + ")" : "clamp(" + arg + ", 0, 5)";
  if (broken) call = "missing_fn(" + arg + ")";
  return helper + "test fn " + name + "() {\n  assert " + call + " >= 0;\n}\n";
}

}  // namespace

ApplyFuzzStats run_apply_fuzz(const fs::path& root, std::mt19937_64& rng, std::size_t operations) {
  ApplyFuzzStats stats;
  std::uniform_int_distribution<int> percent(0, 99);
  for (std::size_t op = 0; op < operations; ++op) {
    const auto before = snapshot(root);
    std::vector<std::string> files;
    for (const auto& [rel, _] : before) {
      if (rel.size() > 3 && rel.ends_with(session::kSourceSuffix)) files.push_back(rel);
    }
    session::ApplyDestination dest;
    const int roll = percent(rng);
    if (roll < 45) {
      dest = session::NewFile{pick(rng, {"", "gen", "gen/deep"}), "suite_" + std::to_string(op)};
    } else if (roll < 50) {
      dest = session::NewFile{"", pick(rng, {"1bad", "with space", "calc"})};
    } else if (roll < 55) {
      dest = session::ExistingFile{pick(rng, {"nope.ml", "../outside.ml", "replies-good/reply-001.md"})};
    } else {
      dest = session::ExistingFile{pick(rng, files)};
    }
    const std::size_t count = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<std::string> codes;
    for (std::size_t i = 0; i < count; ++i) codes.push_back(random_test(rng, percent(rng) < 10));

    bool threw = false;
    try {
      session::apply_to_suite(root, codes, dest);
    } catch (const session::ApplyError&) {
      threw = true;
    }
    const auto after = snapshot(root);
    const std::string where = "operation " + std::to_string(op) + ": ";
    if (threw) {
      ++stats.rolled_back;
      if (after != before) stats.violations.push_back(where + "rollback left the tree modified");
      continue;
    }
    ++stats.committed;
    session::Project project = session::load_project(root);
    if (!project.ok()) stats.violations.push_back(where + "project no longer typechecks: " + project.error);
    std::size_t changed = 0;
    for (const auto& [rel, bytes] : after) {
      auto it = before.find(rel);
      if (it == before.end() || it->second != bytes) {
        if (!rel.ends_with("/")) ++changed;
      }
    }
    for (const auto& [rel, _] : before) {
      if (!after.count(rel)) stats.violations.push_back(where + "removed " + rel);
    }
    if (changed != 1) stats.violations.push_back(where + std::to_string(changed) + " files changed");
  }
  return stats;
}

}  // namespace forgespark::testing
