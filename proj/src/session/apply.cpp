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

#include "forgespark/session/apply.hpp"

#include <fstream>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "forgespark/lang/merge.hpp"
#include "forgespark/lang/parser.hpp"
#include "forgespark/lang/render.hpp"
#include "forgespark/session/project.hpp"

namespace forgespark::session {

namespace fs = std::filesystem;

bool is_identifier(const std::string& name) {
  static const std::regex pattern("[A-Za-z_][A-Za-z0-9_]*");
  return std::regex_match(name, pattern);
}

namespace {

std::optional<std::string> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Write to a sibling temporary, then rename over the target.
bool write_atomically(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".forgespark-tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())) || !out.flush()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      return false;
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    return false;
  }
  return true;
}

// `candidate` lexically inside `root`.
bool inside(const fs::path& root, const fs::path& candidate) {
  auto rel = candidate.lexically_normal().lexically_relative(root.lexically_normal());
  return !rel.empty() && *rel.begin() != ".." && !rel.is_absolute();
}

}  // namespace

ApplyResult apply_to_suite(const fs::path& project_root, const std::vector<std::string>& test_codes,
                           const ApplyDestination& destination) {
  if (test_codes.empty()) throw ApplyError("no tests selected");
  Project project = load_project(project_root);
  if (!project.ok()) throw ApplyError("project does not compile: " + project.error);
  const fs::path root = fs::absolute(project_root);

  fs::path target;
  std::string relative;
  int file = 0;
  std::optional<std::string> original;
  if (const auto* nf = std::get_if<NewFile>(&destination)) {
    if (!is_identifier(nf->name)) throw ApplyError("'" + nf->name + "' is not a valid file name");
    target = (root / nf->directory / (nf->name + kSourceSuffix)).lexically_normal();
    if (!inside(root, target)) throw ApplyError("destination is outside the project");
    if (fs::exists(target)) throw ApplyError("destination already exists: " + target.string());
    relative = target.lexically_relative(root).generic_string();
    file = static_cast<int>(project.files.size());
  } else {
    const auto& ef = std::get<ExistingFile>(destination);
    target = (root / ef.path).lexically_normal();
    if (!inside(root, target)) throw ApplyError("destination is outside the project");
    relative = target.lexically_relative(root).generic_string();
    auto index = project.file_index(relative);
    if (!index) throw ApplyError("not a project source file: " + ef.path);
    file = *index;
    original = read_bytes(target);
    if (!original) throw ApplyError("cannot read " + target.string());
  }

  lang::Program work = project.program;
  if (file == static_cast<int>(work.sources.size())) work.sources.push_back(relative);
  ApplyResult result;
  result.written = target;
  std::set<std::string> added;
  for (std::size_t i = 0; i < test_codes.size(); ++i) {
    lang::Program incoming;
    try {
      incoming = lang::parse(test_codes[i], "<selected>", file);
    } catch (const lang::ParseError& e) {
      throw ApplyError("selected test " + std::to_string(i + 1) + " does not compile: line " +
                       std::to_string(e.line()) + ": " + e.detail());
    }
    if (incoming.tests.empty()) throw ApplyError("selected entry " + std::to_string(i + 1) + " has no test");
    lang::MergeOutcome merged = lang::merge_into(work, std::move(incoming), file);
    for (const auto& [from, to] : merged.renamed) result.renamed.emplace(from, to);
    added.insert(merged.added.begin(), merged.added.end());
  }
  if (auto checked = lang::typecheck(work); !checked.ok()) {
    throw ApplyError("selected tests do not compile:\n" + checked.error_text());
  }

  std::string rendered;
  auto emit = [&](const std::string& name, const std::string& text) {
    result.added.push_back(name);
    if (!rendered.empty()) rendered += "\n";
    rendered += text;
  };
  for (const auto& r : work.records) {
    if (r.file == file && added.count(r.name)) emit(r.name, lang::render(r));
  }
  for (const auto& f : work.functions) {
    if (f.file == file && added.count(f.name)) emit(f.name, lang::render(f));
  }
  for (const auto& t : work.tests) {
    if (t.file == file && added.count(t.name)) emit(t.name, lang::render(t));
  }

  std::string bytes;
  if (original) {
    bytes = *original;
    if (!bytes.empty() && bytes.back() != '\n') bytes += "\n";
    if (!bytes.empty()) bytes += "\n";
  }
  bytes += rendered;

  std::error_code ec;
  fs::path created;  // outermost directory this call creates
  for (fs::path dir = target.parent_path(); !fs::exists(dir); dir = dir.parent_path()) created = dir;
  fs::create_directories(target.parent_path(), ec);
  auto undo_directories = [&] {
    if (!created.empty()) fs::remove_all(created, ec);
  };
  if (!write_atomically(target, bytes)) {
    undo_directories();
    throw ApplyError("destination unwritable: " + target.string());
  }

  Project after = load_project(project_root);
  if (!after.ok()) {
    bool restored = original ? write_atomically(target, *original) : fs::remove(target, ec);
    undo_directories();
    throw ApplyError(std::string("project does not compile after integration") +
                     (restored ? ", rolled back: " : ", rollback failed: ") + after.error);
  }
  return result;
}

}  // namespace forgespark::session
