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

#ifndef FORGESPARK_TESTS_SUPPORT_COVERAGE_ORACLE_HPP_
#define FORGESPARK_TESTS_SUPPORT_COVERAGE_ORACLE_HPP_

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "forgespark/coverage/coverage.hpp"
#include "forgespark/lang/parser.hpp"
#include "reference_interpreter.hpp"

namespace forgespark::testing {

// Statement lines and condition outcomes counted straight from the AST.
struct Denominators {
  std::set<coverage::LineRef> lines;
  std::set<coverage::BranchOutcome> branches;
};

inline Denominators denominators(const lang::Program& program, const std::vector<std::string>& unit) {
  Denominators d;
  for (const auto& fn : program.functions) {
    if (std::find(unit.begin(), unit.end(), fn.name) == unit.end()) continue;
    lang::for_each_stmt(fn.body, [&](const lang::Stmt& s) {
      d.lines.insert({fn.name, s.line});
      if (s.kind == lang::Stmt::Kind::If || s.kind == lang::Stmt::Kind::While) {
        d.branches.insert({fn.name, s.line, true});
        d.branches.insert({fn.name, s.line, false});
      }
    });
  }
  return d;
}

// Coverage of one test as seen by the reference walker.
struct OracleRun {
  bool passed = false;
  std::set<coverage::LineRef> covered;
  std::set<coverage::BranchOutcome> branches;
};

inline OracleRun oracle_run(const lang::Program& program, const std::string& test, std::size_t budget = 100000) {
  std::set<std::string> tests;
  for (const auto& t : program.tests) tests.insert(t.name);
  auto ref = reference_run(program, lang::parse_expression(test + "()"), budget);
  OracleRun out;
  out.passed = ref.outcome == RefResult::Outcome::Normal;
  for (std::size_t i = 0; i < ref.trace.size(); ++i) {
    if (!tests.count(ref.trace_functions[i])) out.covered.insert({ref.trace_functions[i], ref.trace[i]});
  }
  for (const auto& [site, outcomes] : ref.branches) {
    if (tests.count(site.first)) continue;
    for (bool o : outcomes) out.branches.insert({site.first, site.second, o});
  }
  return out;
}

inline double pct(std::size_t a, std::size_t b) {
  return b == 0 ? 0.0 : 100.0 * static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace forgespark::testing

#endif  // FORGESPARK_TESTS_SUPPORT_COVERAGE_ORACLE_HPP_
