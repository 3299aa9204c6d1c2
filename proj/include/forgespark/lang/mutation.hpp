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

#ifndef FORGESPARK_LANG_MUTATION_HPP_
#define FORGESPARK_LANG_MUTATION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "forgespark/lang/typecheck.hpp"

namespace forgespark::lang {

enum class MutationOperator {
  AOR,              // arithmetic operator replacement
  ROR,              // relational operator replacement
  LCR,              // logical connector replacement
  ConstPerturb,     // int literal c -> c-1, c+1, 0; bool literal flipped
  NegateCondition,  // if/while condition c -> !(c)
};

const char* to_string(MutationOperator op);

struct Mutant {
  std::size_t id = 0;
  MutationOperator op = MutationOperator::AOR;
  std::string function;
  int line = 0;
  std::string original_fragment;
  std::string mutated_fragment;
  TypedProgram program;
};

// One mutant per applicable (site, replacement) pair inside `function`, in
// source order. Candidates that fail to typecheck are dropped. Throws
// std::invalid_argument when the function does not exist.
std::vector<Mutant> generate_mutants(const TypedProgram& program, std::string_view function);

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_MUTATION_HPP_
