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

#ifndef FORGESPARK_SESSION_PROJECT_HPP_
#define FORGESPARK_SESSION_PROJECT_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forgespark/lang/typecheck.hpp"

namespace forgespark::session {

inline constexpr const char* kSourceSuffix = ".ml";
inline constexpr const char* kStateDir = ".forgespark";

class ProjectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Project {
  std::filesystem::path root;
  std::vector<std::string> files;  // relative, '/'-separated, sorted; index = Program file
  lang::Program program;
  std::optional<lang::TypedProgram> typed;
  std::string error;  // "calc.ml:3: expected ';'" or typechecker lines, when typed is empty

  bool ok() const { return typed.has_value(); }
  // Index of `relative` in files, if present.
  std::optional<int> file_index(const std::string& relative) const;
};

// Parses and typechecks every `.ml` file under `root` (state directory
// excluded). Compile problems land in Project::error; only an unreadable
// root throws.
Project load_project(const std::filesystem::path& root);

}  // namespace forgespark::session

#endif  // FORGESPARK_SESSION_PROJECT_HPP_
