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

#include "forgespark/llm/context.hpp"

#include <algorithm>
#include <set>

#include "forgespark/lang/render.hpp"

namespace forgespark::llm {

UnitRef UnitRef::whole_file(int file) {
  UnitRef u;
  u.kind = Kind::File;
  u.file = file;
  return u;
}

UnitRef UnitRef::function_unit(std::string name) {
  UnitRef u;
  u.kind = Kind::Function;
  u.function = std::move(name);
  return u;
}

UnitRef UnitRef::line_unit(std::string function, int line) {
  UnitRef u;
  u.kind = Kind::Line;
  u.function = std::move(function);
  u.line = line;
  return u;
}

std::string UnitRef::describe(const lang::Program& program) const {
  switch (kind) {
    case Kind::File: {
      std::string path = file >= 0 && static_cast<std::size_t>(file) < program.sources.size()
                             ? program.sources[static_cast<std::size_t>(file)]
                             : "<input>";
      return "file `" + path + "`";
    }
    case Kind::Function:
      return "function `" + function + "`";
    case Kind::Line:
      return "line " + std::to_string(line) + " of function `" + function + "`";
  }
  return "";
}

std::vector<const lang::FunctionDecl*> unit_functions(const lang::TypedProgram& program, const UnitRef& unit) {
  std::vector<const lang::FunctionDecl*> out;
  if (unit.kind == UnitRef::Kind::File) {
    for (const auto& fn : program.program().functions) {
      if (fn.file == unit.file) out.push_back(&fn);
    }
    if (out.empty()) throw UnknownUnit("no functions in file " + std::to_string(unit.file));
    return out;
  }
  const lang::FunctionDecl* fn = program.function_named(unit.function);
  if (fn == nullptr || fn->is_test) throw UnknownUnit("unknown function '" + unit.function + "'");
  if (unit.kind == UnitRef::Kind::Line && (unit.line < fn->first_line || unit.line > fn->last_line)) {
    throw UnknownUnit("line not in unit");
  }
  out.push_back(fn);
  return out;
}

PromptContext gather_context(const lang::TypedProgram& program, const UnitRef& unit, const PromptDepths& depths,
                             int requested_tests) {
  if (depths.input_depth < 0 || depths.polymorphism_depth < 0) throw std::invalid_argument("negative depth");
  const auto functions = unit_functions(program, unit);
  PromptContext ctx;

  ctx.problem_description = "Generate " + std::to_string(requested_tests) + " unit tests for " +
                            (unit.kind == UnitRef::Kind::File ? "the functions in " : "") +
                            unit.describe(program.program()) + ".";
  if (unit.kind == UnitRef::Kind::Line) {
    ctx.problem_description += " Every test should execute line " + std::to_string(unit.line) + ".";
  }

  if (unit.kind == UnitRef::Kind::File) {
    for (const auto& rec : program.program().records) {
      if (rec.file == unit.file) ctx.uut_code += lang::render(rec) + "\n";
    }
  }
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (!ctx.uut_code.empty()) ctx.uut_code += "\n";
    ctx.uut_code += lang::render(*functions[i]);
  }

  std::vector<std::string> included;
  std::set<std::string> seen;
  std::vector<std::string> frontier;
  for (const auto* fn : functions) {
    for (const auto& p : fn->params) {
      if (p.type.is_record() && seen.insert(p.type.record).second) frontier.push_back(p.type.record);
    }
  }
  for (int level = 1; level <= depths.input_depth && !frontier.empty(); ++level) {
    std::vector<std::string> next;
    for (const auto& name : frontier) {
      included.push_back(name);
      for (const auto& f : program.find_record(name)->fields) {
        if (f.type.is_record() && seen.insert(f.type.record).second) next.push_back(f.type.record);
      }
    }
    frontier = std::move(next);
  }
  for (const auto& name : included) {
    for (const auto& rec : program.program().records) {
      if (rec.name == name) ctx.dependency_signatures.push_back({name, lang::render_record_inline(rec)});
    }
  }
  if (depths.input_depth >= 1) {
    std::set<std::string> listed;
    for (const auto* fn : functions) listed.insert(fn->name);
    for (const auto* fn : functions) {
      for (const auto& callee : lang::called_functions(fn->body)) {
        const lang::FunctionDecl* target = program.function_named(callee);
        if (target == nullptr || !listed.insert(callee).second) continue;
        ctx.dependency_signatures.push_back({callee, lang::render_signature(*target)});
      }
    }
  }

  std::set<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> level_types = included;
  for (int level = 1; level <= depths.polymorphism_depth && !level_types.empty(); ++level) {
    std::vector<std::string> next;
    for (const auto& name : level_types) {
      for (const auto& sub : program.find_record(name)->direct_subtypes) {
        if (pairs.insert({name, sub}).second) {
          ctx.subtype_relations.emplace_back(name, sub);
          next.push_back(sub);
        }
      }
    }
    level_types = std::move(next);
  }
  return ctx;
}

}  // namespace forgespark::llm
