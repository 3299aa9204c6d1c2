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

#include "forgespark/session/project.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "forgespark/lang/parser.hpp"

namespace forgespark::session {

namespace fs = std::filesystem;

std::optional<int> Project::file_index(const std::string& relative) const {
  auto it = std::find(files.begin(), files.end(), relative);
  if (it == files.end()) return std::nullopt;
  return static_cast<int>(it - files.begin());
}

Project load_project(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw ProjectError("project directory not found: " + root.string());
  Project project;
  project.root = root;
  for (auto it = fs::recursive_directory_iterator(root, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->is_directory() && it->path().filename() == kStateDir) {
      it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file() && it->path().extension() == kSourceSuffix) {
      project.files.push_back(fs::relative(it->path(), root).generic_string());
    }
  }
  if (ec) throw ProjectError("cannot read project directory " + root.string() + ": " + ec.message());
  std::sort(project.files.begin(), project.files.end());

  std::vector<std::string> problems;
  for (std::size_t i = 0; i < project.files.size(); ++i) {
    const std::string& name = project.files[i];
    std::ifstream in(root / name, std::ios::binary);
    if (!in) throw ProjectError("cannot read " + name);
    std::ostringstream text;
    text << in.rdbuf();
    project.program.sources.push_back(name);
    try {
      lang::Program part = lang::parse(text.str(), name, static_cast<int>(i));
      for (auto& r : part.records) project.program.records.push_back(std::move(r));
      for (auto& f : part.functions) project.program.functions.push_back(std::move(f));
      for (auto& t : part.tests) project.program.tests.push_back(std::move(t));
    } catch (const lang::ParseError& e) {
      problems.push_back(name + ":" + std::to_string(e.line()) + ": " + e.detail());
    }
  }
  if (!problems.empty()) {
    for (const auto& p : problems) project.error += (project.error.empty() ? "" : "\n") + p;
    return project;
  }
  lang::TypecheckResult checked = lang::typecheck(project.program);
  if (checked.ok()) {
    project.typed = std::move(checked.typed);
  } else {
    for (const auto& e : checked.errors) {
      const std::string& file = project.program.sources.at(static_cast<std::size_t>(e.file));
      project.error += (project.error.empty() ? "" : "\n") + file + ":" + std::to_string(e.line) + ": " + e.message;
    }
  }
  return project;
}

}  // namespace forgespark::session
