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

#ifndef FORGESPARK_LLM_CANDIDATES_HPP_
#define FORGESPARK_LLM_CANDIDATES_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forgespark/lang/typecheck.hpp"

namespace forgespark::llm {

struct CompileStatus {
  enum class Kind { Unchecked, Compiles, Fails };

  Kind kind = Kind::Unchecked;
  std::vector<std::string> errors;  // Fails only

  bool compiles() const { return kind == Kind::Compiles; }
};

struct TestCandidate {
  std::string name;
  std::string code;  // the test plus the helpers and records it uses
  CompileStatus status;
};

class EmptyResponse : public std::runtime_error {
 public:
  EmptyResponse() : std::runtime_error("the response contains no test functions") {}
};

// Contents of all ``` fenced blocks, joined by newlines; the whole text when
// there are none. An unterminated fence runs to the end.
std::string extract_code(std::string_view text);

struct ParsedResponse {
  std::vector<TestCandidate> candidates;
  std::vector<std::string> skipped;  // one message per top-level item that did not parse
};

// One candidate per `test fn`, carrying the helper functions and records from
// the same response that it references, directly or through other helpers.
// Throws EmptyResponse when no test function could be extracted.
ParsedResponse parse_response(std::string_view text);

// Appends the candidate to a copy of the project (colliding names renamed)
// and typechecks. Fails carries every error as "line N: message", lines
// counted within the candidate code.
TestCandidate check_candidate(const lang::TypedProgram& program, TestCandidate candidate);

// Code with all whitespace runs collapsed, for deduplication.
std::string normalized_code(std::string_view code);

}  // namespace forgespark::llm

#endif  // FORGESPARK_LLM_CANDIDATES_HPP_
