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

#ifndef FORGESPARK_LANG_MERGE_HPP_
#define FORGESPARK_LANG_MERGE_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "forgespark/lang/ast.hpp"

namespace forgespark::lang {

struct MergeOutcome {
  std::map<std::string, std::string> renamed;  // incoming name -> name used
  std::vector<std::string> deduplicated;       // helpers identical to an existing one
  std::vector<std::string> added;              // top-level names appended, final spelling
};

// All top-level names (records, functions, tests).
std::set<std::string> top_level_names(const Program& program);

// First of `base_2`, `base_3`, ... not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// Rewrites references to functions and record types inside `program`.
void rename_references(Program& program, const std::map<std::string, std::string>& renames);

// Appends `incoming` to `target`, tagging its declarations with `file`.
// Colliding names get numeric suffixes (references inside `incoming` follow);
// helper functions and records structurally identical to an existing
// declaration of the same name are dropped instead.
MergeOutcome merge_into(Program& target, Program incoming, int file);

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_MERGE_HPP_
