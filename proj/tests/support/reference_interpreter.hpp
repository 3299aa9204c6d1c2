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

#ifndef FORGESPARK_TESTS_SUPPORT_REFERENCE_INTERPRETER_HPP_
#define FORGESPARK_TESTS_SUPPORT_REFERENCE_INTERPRETER_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forgespark/lang/ast.hpp"
#include "forgespark/lang/value.hpp"

namespace forgespark::testing {

// A deliberately naive second interpreter used as a test oracle. It walks the
// untyped AST with string-keyed environments copied per scope and shares no
// code with the production interpreter beyond the AST definitions.
struct RefValue {
  enum class Kind { Unit, Int, Bool, Array, Record } kind = Kind::Unit;
  std::int64_t i = 0;
  bool b = false;
  std::vector<std::int64_t> arr;
  std::string type;
  std::map<std::string, RefValue> fields;

  friend bool operator==(const RefValue&, const RefValue&) = default;
};

RefValue from_value(const lang::Value& value);

struct RefResult {
  enum class Outcome { Normal, Error, StepLimit } outcome = Outcome::Normal;
  RefValue value;
  std::string error;  // "division by zero", ... (same wording as the product)
  int error_line = 0;
  std::vector<int> trace;
  std::vector<std::string> trace_functions;
  std::size_t steps = 0;
  // (function, line) -> outcomes observed at that condition
  std::map<std::pair<std::string, int>, std::set<bool>> branches;
};

RefResult reference_run(const lang::Program& program, const lang::Expr& entry,
                        std::size_t step_budget = 100000);

}  // namespace forgespark::testing

#endif  // FORGESPARK_TESTS_SUPPORT_REFERENCE_INTERPRETER_HPP_
