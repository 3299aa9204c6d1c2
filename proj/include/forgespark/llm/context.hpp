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

#ifndef FORGESPARK_LLM_CONTEXT_HPP_
#define FORGESPARK_LLM_CONTEXT_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forgespark/lang/typecheck.hpp"

namespace forgespark::llm {

// The unit tests are generated for: a whole file, one function, or one line
// inside a function.
struct UnitRef {
  enum class Kind { File, Function, Line };

  Kind kind = Kind::Function;
  int file = 0;          // index into Program::sources (File)
  std::string function;  // Function and Line
  int line = 0;          // Line

  static UnitRef whole_file(int file);
  static UnitRef function_unit(std::string name);
  static UnitRef line_unit(std::string function, int line);

  // "function `abs`", "file `calc.ml`", "line 7 of function `abs`".
  std::string describe(const lang::Program& program) const;
};

struct PromptDepths {
  int input_depth = 2;
  int polymorphism_depth = 2;

  friend bool operator==(const PromptDepths&, const PromptDepths&) = default;
};

struct Signature {
  std::string name;
  std::string declaration;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct PromptContext {
  std::string problem_description;
  std::string uut_code;
  std::vector<Signature> dependency_signatures;
  std::vector<std::pair<std::string, std::string>> subtype_relations;  // (supertype, subtype)
};

class UnknownUnit : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The functions a unit consists of, in declaration order.
std::vector<const lang::FunctionDecl*> unit_functions(const lang::TypedProgram& program, const UnitRef& unit);

// Record types reachable from the unit's parameters, level by level up to
// input_depth, followed by the signatures of project functions the unit calls
// (those count as level 1). Subtype pairs are collected downward from every
// included record for polymorphism_depth levels.
PromptContext gather_context(const lang::TypedProgram& program, const UnitRef& unit, const PromptDepths& depths,
                             int requested_tests = 5);

}  // namespace forgespark::llm

#endif  // FORGESPARK_LLM_CONTEXT_HPP_
