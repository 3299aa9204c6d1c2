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

#ifndef FORGESPARK_LANG_PARSER_HPP_
#define FORGESPARK_LANG_PARSER_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forgespark/lang/ast.hpp"

namespace forgespark::lang {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

// Parses a whole MiniLang source file. Throws ParseError on the first syntax
// violation. Every declaration is tagged with `file`.
Program parse(std::string_view source, std::string source_name = "<input>",
              int file = 0);

// Parses a single expression (e.g. an entry call `inc(41)`).
Expr parse_expression(std::string_view source);

// Result of lenient parsing: top-level items that parsed, plus one error per
// item that did not.
struct TolerantParse {
  Program program;
  std::vector<ParseError> skipped;
};

// Splits `source` at top-level `record` / `fn` / `test` keywords and parses
// each item on its own, keeping line numbers of the original text.
TolerantParse parse_tolerant(std::string_view source);

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_PARSER_HPP_
