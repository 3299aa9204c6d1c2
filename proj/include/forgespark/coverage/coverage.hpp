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

#ifndef FORGESPARK_COVERAGE_COVERAGE_HPP_
#define FORGESPARK_COVERAGE_COVERAGE_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "forgespark/lang/interpreter.hpp"
#include "forgespark/lang/mutation.hpp"

namespace forgespark::coverage {

struct LineRef {
  std::string function;
  int line = 0;
  friend auto operator<=>(const LineRef&, const LineRef&) = default;
};

struct BranchOutcome {
  std::string function;
  int line = 0;
  bool outcome = false;
  friend auto operator<=>(const BranchOutcome&, const BranchOutcome&) = default;
};

// A test to run: the report-level id and the test function's name in the program.
struct TestSpec {
  std::string id;
  std::string name;
};

struct TestRun {
  std::string id;
  std::string name;
  bool passed = false;
  std::string error;  // empty when passed
  int error_line = 0;
  std::set<LineRef> covered;  // lines executed in non-test functions
  std::set<BranchOutcome> branches;
};

// Runs each test function. Pass means normal completion (every assert held,
// every expect_error saw an error).
std::vector<TestRun> run_tests(const lang::TypedProgram& program, const std::vector<TestSpec>& tests,
                               std::size_t step_budget = lang::kDefaultStepBudget);

struct MutantResult {
  std::size_t id = 0;
  lang::MutationOperator op = lang::MutationOperator::AOR;
  std::string function;
  int line = 0;
  std::string original_fragment;
  std::string mutated_fragment;
  std::set<std::string> killed_by;  // test ids
};

// Kills of each mutant by tests that pass on the original program. With
// `skip_uncovered`, a test only runs against mutants on lines it covers,
// which gives the same kill sets because the other runs cannot diverge.
std::vector<MutantResult> run_mutation(const std::vector<TestRun>& baseline, const std::vector<lang::Mutant>& mutants,
                                       std::size_t step_budget = lang::kDefaultStepBudget, bool skip_uncovered = true);

struct Totals {
  std::size_t covered_lines = 0;
  std::size_t total_lines = 0;
  std::size_t covered_branches = 0;
  std::size_t total_branches = 0;
  std::size_t killed_mutants = 0;
  std::size_t total_mutants = 0;
  double line_coverage_pct = 0;
  double branch_outcome_pct = 0;
  double mutation_score_pct = 0;

  friend bool operator==(const Totals&, const Totals&) = default;
};

struct LineEntry {
  std::set<std::string> covering_tests;
  std::vector<std::size_t> mutants;
};

class UnknownTest : public std::invalid_argument {
 public:
  explicit UnknownTest(const std::string& id) : std::invalid_argument("unknown test id '" + id + "'") {}
};

class CoverageReport {
 public:
  // `uut_functions` fixes the denominators: their statement lines and both
  // outcomes of each of their conditions.
  CoverageReport(const lang::TypedProgram& program, const std::vector<std::string>& uut_functions,
                 std::vector<TestRun> runs, std::vector<MutantResult> mutants);

  const std::vector<TestRun>& tests() const { return runs_; }
  const TestRun& test(const std::string& id) const;
  const std::vector<MutantResult>& mutants() const { return mutants_; }
  const std::vector<std::string>& uut_functions() const { return uut_functions_; }
  const std::set<LineRef>& executable_lines() const { return executable_; }
  const std::set<BranchOutcome>& branch_outcomes() const { return branch_outcomes_; }

  // Covering tests and mutants per executable line of the unit.
  const std::map<LineRef, LineEntry>& per_line() const { return per_line_; }

  Totals totals(const std::set<std::string>& selection) const;
  Totals totals() const;  // every test

 private:
  std::vector<std::string> uut_functions_;
  std::vector<TestRun> runs_;
  std::vector<MutantResult> mutants_;
  std::set<LineRef> executable_;
  std::set<BranchOutcome> branch_outcomes_;
  std::map<LineRef, LineEntry> per_line_;
};

// Runs the tests (and, when `with_mutation`, mutants of every unit function)
// and assembles the report. `program` must contain the tests.
CoverageReport analyze(const lang::TypedProgram& program, const std::vector<std::string>& uut_functions,
                       const std::vector<TestSpec>& tests, bool with_mutation,
                       std::size_t step_budget = lang::kDefaultStepBudget);

}  // namespace forgespark::coverage

#endif  // FORGESPARK_COVERAGE_COVERAGE_HPP_
