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

#ifndef FORGESPARK_LANG_INTERPRETER_HPP_
#define FORGESPARK_LANG_INTERPRETER_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forgespark/lang/ast.hpp"
#include "forgespark/lang/typecheck.hpp"
#include "forgespark/lang/value.hpp"

namespace forgespark::lang {

inline constexpr std::size_t kDefaultStepBudget = 100000;
inline constexpr std::size_t kMaxCallDepth = 256;

enum class RuntimeErrorKind {
  DivisionByZero,
  IndexOutOfRange,
  AssertionFailed,
  ExpectedErrorNotRaised,
  CallDepthExceeded,
};

const char* to_string(RuntimeErrorKind kind);

// Where a condition (if/while) was evaluated.
struct BranchSite {
  FunctionId function = 0;
  int line = 0;
  friend auto operator<=>(const BranchSite&, const BranchSite&) = default;
};

// Aggregated over every evaluation of one condition during a run.
// Distances follow the Korel/Tracey rules with K = 1 (raw, unnormalized).
struct BranchRecord {
  bool took_true = false;
  bool took_false = false;
  double min_distance_true = 0;
  double min_distance_false = 0;
};

struct ExecutionResult {
  enum class Outcome { Normal, RuntimeError, StepLimitExceeded };

  Outcome outcome = Outcome::Normal;
  Value value;
  RuntimeErrorKind error_kind = RuntimeErrorKind::AssertionFailed;
  int error_line = 0;
  std::vector<int> trace;                  // executed statement lines, in order
  std::vector<FunctionId> trace_functions;  // function executing each trace entry
  std::size_t steps = 0;
  std::map<BranchSite, BranchRecord> branches;

  bool normal() const { return outcome == Outcome::Normal; }
  // "division by zero at line 3", "step limit exceeded", ...
  std::string describe() const;
};

struct InterpretOptions {
  std::size_t step_budget = kDefaultStepBudget;
};

// Runs `function(args)`. Arguments must conform to the parameter types.
ExecutionResult call(const TypedProgram& program, std::string_view function,
                     std::span<const Value> args, const InterpretOptions& options = {});

// Evaluates a typechecked entry expression, typically a call.
ExecutionResult interpret(const TypedProgram& program, const Expr& entry,
                          const InterpretOptions& options = {});

// Parses and typechecks `entry` (e.g. "inc(41)") before running it. Throws
// ParseError, or std::invalid_argument carrying the type errors.
ExecutionResult interpret(const TypedProgram& program, std::string_view entry,
                          const InterpretOptions& options = {});

// Korel/Tracey distance of a relational comparison towards `desired`, K = 1.
double relational_distance(BinaryOp op, std::int64_t lhs, std::int64_t rhs, bool desired);

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_INTERPRETER_HPP_
