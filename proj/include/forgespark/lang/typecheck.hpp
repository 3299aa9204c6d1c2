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

#ifndef FORGESPARK_LANG_TYPECHECK_HPP_
#define FORGESPARK_LANG_TYPECHECK_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forgespark/lang/ast.hpp"

namespace forgespark::lang {

// Message texts are stable: repair prompts quote them verbatim.
struct TypeError {
  int line = 0;
  std::string message;
  int file = 0;  // index into Program::sources

  std::string to_string() const;  // "line N: message"
  friend bool operator==(const TypeError&, const TypeError&) = default;
};

struct RecordInfo {
  std::string name;
  std::optional<std::string> parent;
  std::vector<FieldDecl> fields;  // inherited fields first
  std::vector<std::string> direct_subtypes;
};

// Index of a function in TypedProgram: functions first, then tests.
using FunctionId = std::uint32_t;

// A program that passed typechecking, with every expression annotated.
// Immutable; copies share the same underlying program.
class TypedProgram {
 public:
  const Program& program() const { return *program_; }

  std::size_t function_count() const { return functions_.size(); }
  const FunctionDecl& function(FunctionId id) const { return *functions_[id]; }
  std::optional<FunctionId> find_function(std::string_view name) const;
  const FunctionDecl* function_named(std::string_view name) const;

  const RecordInfo* find_record(std::string_view name) const;
  const std::vector<RecordInfo>& records() const { return records_; }

  // Reflexive-transitive subtype relation along extends-chains.
  bool is_subtype(std::string_view sub, std::string_view super) const;
  bool is_assignable(const Type& from, const Type& to) const;

  // Every record that is `name` or transitively extends it, declaration order.
  std::vector<std::string> concrete_types_for(std::string_view name) const;

  // The function whose line span contains `line` in `file`.
  const FunctionDecl* function_at_line(int line, int file = 0) const;

 private:
  friend struct TypecheckAccess;

  std::shared_ptr<const Program> program_;
  std::vector<const FunctionDecl*> functions_;
  std::unordered_map<std::string, FunctionId> function_index_;
  std::vector<RecordInfo> records_;
  std::unordered_map<std::string, std::size_t> record_index_;
};

struct TypecheckResult {
  std::optional<TypedProgram> typed;
  std::vector<TypeError> errors;  // all errors, in source order

  bool ok() const { return typed.has_value(); }
  std::string error_text() const;  // one error per line
};

TypecheckResult typecheck(Program program);

// Typechecks a standalone expression against `program` (e.g. an entry call).
// Returns the annotated expression or the errors.
struct ExpressionCheck {
  std::optional<Expr> expr;
  std::vector<TypeError> errors;
};
ExpressionCheck typecheck_expression(const TypedProgram& program, Expr expr);

// Name of the builtin `len(int[]) -> int`.
inline constexpr std::string_view kLenBuiltin = "len";

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_TYPECHECK_HPP_
