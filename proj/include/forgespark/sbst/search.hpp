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

#ifndef FORGESPARK_SBST_SEARCH_HPP_
#define FORGESPARK_SBST_SEARCH_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forgespark/cfg/dependence.hpp"
#include "forgespark/lang/interpreter.hpp"
#include "forgespark/sbst/fitness.hpp"
#include "forgespark/sbst/values.hpp"

namespace forgespark::sbst {

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TestChromosome {
  std::string entry_function;
  std::vector<lang::Value> arguments;
  std::map<cfg::CoverageGoal, FitnessValue> fitness_cache;
  std::optional<lang::ExecutionResult> last_execution;

  // Total weight of the arguments; smaller is preferred.
  std::size_t weight() const;
  // Replaces argument `i` and drops everything derived from the old arguments.
  void set_argument(std::size_t i, lang::Value value);
};

enum class GoalStatus { Dormant, Active, Covered };

const char* to_string(GoalStatus status);

// Goal statuses. Goals never registered (outside the single-line filter)
// have no status at all.
class ObjectiveState {
 public:
  void add_dormant(const cfg::CoverageGoal& goal);
  // Dormant -> Active; no effect on Active or Covered goals.
  void activate(const cfg::CoverageGoal& goal);
  // Dormant or Active -> Covered.
  void cover(const cfg::CoverageGoal& goal);

  bool tracked(const cfg::CoverageGoal& goal) const { return status_.count(goal) != 0; }
  GoalStatus status(const cfg::CoverageGoal& goal) const;
  const cfg::GoalSet& active() const { return active_; }
  const cfg::GoalSet& covered() const { return covered_; }
  cfg::GoalSet dormant() const;
  cfg::GoalSet all() const;

 private:
  std::map<cfg::CoverageGoal, GoalStatus> status_;
  cfg::GoalSet active_;
  cfg::GoalSet covered_;
};

struct ArchiveEntry {
  TestChromosome test;
  lang::ExecutionResult execution;
};

class Archive {
 public:
  // Keeps the first covering test of a goal and later replaces it only by a
  // strictly lighter one. Returns whether the entry changed.
  bool offer(const cfg::CoverageGoal& goal, const TestChromosome& test, const lang::ExecutionResult& execution);

  const std::map<cfg::CoverageGoal, ArchiveEntry>& entries() const { return entries_; }
  bool contains(const cfg::CoverageGoal& goal) const { return entries_.count(goal) != 0; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<cfg::CoverageGoal, ArchiveEntry> entries_;
};

enum class SearchMode { FullUnit, SingleLine };

struct SearchConfig {
  std::size_t population_size = 50;
  std::size_t max_evaluations = 10000;
  double crossover_rate = 0.75;
  // Chance of each further argument mutation after the mandatory one.
  double mutation_rate = 0.2;
  std::uint64_t rng_seed = 42;
  SearchMode mode = SearchMode::FullUnit;
  int target_line = 0;  // SingleLine only
  std::size_t step_budget = lang::kDefaultStepBudget;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct GenerationSnapshot {
  std::size_t generation = 0;
  std::size_t evaluations = 0;
  cfg::GoalSet active;
  cfg::GoalSet covered;
};

using SearchObserver = std::function<void(const GenerationSnapshot&)>;

struct CoverageSummary {
  std::size_t total_goals = 0;
  std::size_t covered_goals = 0;
  std::vector<int> covered_lines;  // lines of the unit, sorted
  std::size_t evaluations = 0;
  std::size_t generations = 0;
  bool target_covered = false;  // SingleLine only
};

struct EmittedTest {
  std::string name;
  std::string code;  // canonical source of the test
  lang::TestDecl decl;
  cfg::CoverageGoal goal;  // first archived goal this test stands for
  std::vector<lang::Value> arguments;
};

struct SearchResult {
  std::vector<EmittedTest> tests;
  Archive archive;
  CoverageSummary summary;
  cfg::GoalSet goals;  // every goal the search was after
};

// What evolve needs to know about the unit.
struct SearchContext {
  const lang::TypedProgram* program = nullptr;
  const lang::FunctionDecl* uut = nullptr;
  lang::FunctionId uut_id = 0;
  const cfg::ControlDependenceMap* dependences = nullptr;
  const ValueFactory* values = nullptr;
};

// Runs the unit with `test`'s arguments and fills last_execution.
void evaluate(TestChromosome& test, const SearchContext& context, std::size_t step_budget);

// Fitness of an evaluated chromosome for `goal`, cached.
const FitnessValue& fitness(TestChromosome& test, const cfg::CoverageGoal& goal, const SearchContext& context);

// Best combined fitness over the active goals (infinity if there are none).
double rank(TestChromosome& test, const ObjectiveState& objectives, const SearchContext& context);

// Single-point crossover: a[0..point) + b[point..), b[0..point) + a[point..).
std::pair<TestChromosome, TestChromosome> crossover(const TestChromosome& a, const TestChromosome& b,
                                                    std::size_t point);

// Changes one argument, then each further one with config.mutation_rate.
void mutate(TestChromosome& test, const SearchContext& context, const SearchConfig& config, Rng& rng);

// Best of four random picks by (rank, weight).
std::size_t tournament(std::vector<TestChromosome>& population, const ObjectiveState& objectives,
                       const SearchContext& context, Rng& rng);

// Next generation: the best chromosome for every uncovered active goal, then
// mutated offspring of tournament winners. Offspring are not evaluated.
std::vector<TestChromosome> evolve(std::vector<TestChromosome>& population, const ObjectiveState& objectives,
                                   const SearchConfig& config, const SearchContext& context, Rng& rng);

// A regression test pinning the observed behaviour, or nothing when the run
// hit the step limit.
std::optional<EmittedTest> synthesize_assertions(const lang::FunctionDecl& uut,
                                                 const std::vector<lang::Value>& arguments,
                                                 const lang::ExecutionResult& execution, std::string name);

SearchResult run_search(const lang::TypedProgram& program, std::string_view uut, const SearchConfig& config,
                        const SearchObserver& observer = {});

// Typechecks first; SearchError("project does not compile: ...") on failure.
SearchResult run_search(const lang::Program& program, std::string_view uut, const SearchConfig& config,
                        const SearchObserver& observer = {});

}  // namespace forgespark::sbst

#endif  // FORGESPARK_SBST_SEARCH_HPP_
