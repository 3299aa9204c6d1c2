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

#include "forgespark/coverage/coverage.hpp"

#include <algorithm>

#include "forgespark/cfg/cfg.hpp"

namespace forgespark::coverage {

std::vector<TestRun> run_tests(const lang::TypedProgram& program, const std::vector<TestSpec>& tests,
                               std::size_t step_budget) {
  std::vector<TestRun> runs;
  runs.reserve(tests.size());
  for (const auto& spec : tests) {
    const lang::FunctionDecl* fn = program.function_named(spec.name);
    if (fn == nullptr || !fn->is_test) throw UnknownTest(spec.name);
    lang::ExecutionResult exec = lang::call(program, spec.name, {}, {step_budget});
    TestRun run{spec.id, spec.name, exec.normal(), {}, 0, {}, {}};
    if (!run.passed) {
      run.error = exec.describe();
      run.error_line = exec.error_line;
    }
    for (std::size_t i = 0; i < exec.trace.size(); ++i) {
      const lang::FunctionDecl& owner = program.function(exec.trace_functions[i]);
      if (!owner.is_test) run.covered.insert(LineRef{owner.name, exec.trace[i]});
    }
    for (const auto& [site, record] : exec.branches) {
      const lang::FunctionDecl& owner = program.function(site.function);
      if (owner.is_test) continue;
      if (record.took_true) run.branches.insert(BranchOutcome{owner.name, site.line, true});
      if (record.took_false) run.branches.insert(BranchOutcome{owner.name, site.line, false});
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

std::vector<MutantResult> run_mutation(const std::vector<TestRun>& baseline, const std::vector<lang::Mutant>& mutants,
                                       std::size_t step_budget, bool skip_uncovered) {
  std::vector<MutantResult> out;
  out.reserve(mutants.size());
  for (const auto& m : mutants) {
    MutantResult r{m.id, m.op, m.function, m.line, m.original_fragment, m.mutated_fragment, {}};
    for (const auto& test : baseline) {
      if (!test.passed) continue;
      if (skip_uncovered && !test.covered.count(LineRef{m.function, m.line})) continue;
      lang::ExecutionResult exec = lang::call(m.program, test.name, {}, {step_budget});
      if (!exec.normal()) r.killed_by.insert(test.id);
    }
    out.push_back(std::move(r));
  }
  return out;
}

CoverageReport::CoverageReport(const lang::TypedProgram& program, const std::vector<std::string>& uut_functions,
                               std::vector<TestRun> runs, std::vector<MutantResult> mutants)
    : uut_functions_(uut_functions), runs_(std::move(runs)), mutants_(std::move(mutants)) {
  for (const auto& name : uut_functions_) {
    const lang::FunctionDecl* fn = program.function_named(name);
    if (fn == nullptr || fn->is_test) throw std::invalid_argument("unknown function '" + name + "'");
    cfg::ControlFlowGraph graph = cfg::build_cfg(*fn);
    for (const auto& block : graph.blocks()) {
      for (int line : block.lines) executable_.insert(LineRef{name, line});
      if (block.branch_line != 0) {
        branch_outcomes_.insert(BranchOutcome{name, block.branch_line, true});
        branch_outcomes_.insert(BranchOutcome{name, block.branch_line, false});
      }
    }
  }
  for (const auto& line : executable_) per_line_[line];
  for (const auto& run : runs_) {
    for (const auto& line : run.covered) {
      if (auto it = per_line_.find(line); it != per_line_.end()) it->second.covering_tests.insert(run.id);
    }
  }
  for (const auto& m : mutants_) {
    if (auto it = per_line_.find(LineRef{m.function, m.line}); it != per_line_.end()) it->second.mutants.push_back(m.id);
  }
}

const TestRun& CoverageReport::test(const std::string& id) const {
  auto it = std::find_if(runs_.begin(), runs_.end(), [&](const TestRun& r) { return r.id == id; });
  if (it == runs_.end()) throw UnknownTest(id);
  return *it;
}

namespace {

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

Totals CoverageReport::totals(const std::set<std::string>& selection) const {
  for (const auto& id : selection) test(id);
  std::set<LineRef> lines;
  std::set<BranchOutcome> branches;
  for (const auto& run : runs_) {
    if (!selection.count(run.id)) continue;
    for (const auto& l : run.covered) {
      if (executable_.count(l)) lines.insert(l);
    }
    for (const auto& b : run.branches) {
      if (branch_outcomes_.count(b)) branches.insert(b);
    }
  }
  Totals t;
  t.covered_lines = lines.size();
  t.total_lines = executable_.size();
  t.covered_branches = branches.size();
  t.total_branches = branch_outcomes_.size();
  t.total_mutants = mutants_.size();
  for (const auto& m : mutants_) {
    if (std::any_of(m.killed_by.begin(), m.killed_by.end(), [&](const std::string& id) { return selection.count(id); })) {
      ++t.killed_mutants;
    }
  }
  t.line_coverage_pct = percent(t.covered_lines, t.total_lines);
  t.branch_outcome_pct = percent(t.covered_branches, t.total_branches);
  t.mutation_score_pct = percent(t.killed_mutants, t.total_mutants);
  return t;
}

Totals CoverageReport::totals() const {
  std::set<std::string> all;
  for (const auto& run : runs_) all.insert(run.id);
  return totals(all);
}

CoverageReport analyze(const lang::TypedProgram& program, const std::vector<std::string>& uut_functions,
                       const std::vector<TestSpec>& tests, bool with_mutation, std::size_t step_budget) {
  std::vector<TestRun> runs = run_tests(program, tests, step_budget);
  std::vector<MutantResult> results;
  if (with_mutation) {
    std::size_t next_id = 0;
    for (const auto& name : uut_functions) {
      std::vector<lang::Mutant> mutants = lang::generate_mutants(program, name);
      for (auto& m : mutants) m.id = next_id++;
      auto part = run_mutation(runs, mutants, step_budget);
      results.insert(results.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  return CoverageReport(program, uut_functions, std::move(runs), std::move(results));
}

}  // namespace forgespark::coverage
