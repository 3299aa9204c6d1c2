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

#ifndef FORGESPARK_LANG_RENDER_HPP_
#define FORGESPARK_LANG_RENDER_HPP_

#include <string>

#include "forgespark/lang/ast.hpp"

namespace forgespark::lang {

// Canonical formatting: one statement per line, two-space indent, records
// first, then functions, then tests, separated by blank lines. Parsing the
// output yields a structurally identical program.
std::string render(const Program& program);

std::string render(const FunctionDecl& function);
std::string render(const RecordDecl& record);
std::string render(const Expr& expr);

// `fn name(a: int) -> int` without the body.
std::string render_signature(const FunctionDecl& function);

// Record declaration on a single line, e.g. `record Cat extends Animal { lives: int; }`.
std::string render_record_inline(const RecordDecl& record);

// Parses and re-renders. Throws ParseError on malformed input.
std::string canonicalize(std::string_view source);

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_RENDER_HPP_
