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

#include "forgespark/sbst/search.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

#include "forgespark/cfg/cfg.hpp"
#include "forgespark/lang/parser.hpp"
#include "forgespark/lang/render.hpp"

namespace forgespark::sbst {

namespace {

constexpr std::size_t kTournamentSize = 4;

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::string argument_list(const std::vector<lang::Value>& arguments) {
  std::string out;
  for (std::size_t i = 0; i < arguments.size(); ++i) {
    if (i) out += ", ";
    out += lang::to_literal(arguments[i]);
  }
  return out;
}

}  // namespace

std::size_t TestChromosome::weight() const {
  std::size_t w = 0;
  for (const auto& a : arguments) w += a.weight();
  return w;
}

void TestChromosome::set_argument(std::size_t i, lang::Value value) {
  arguments.at(i) = std::move(value);
  fitness_cache.clear();
  last_execution.reset();
}

const char* to_string(GoalStatus status) {
  switch (status) {
    case GoalStatus::Dormant:
      return "dormant";
    case GoalStatus::Active:
      return "active";
    case GoalStatus::Covered:
      return "covered";
  }
  return "?";
}

void ObjectiveState::add_dormant(const cfg::CoverageGoal& goal) { status_.emplace(goal, GoalStatus::Dormant); }

void ObjectiveState::activate(const cfg::CoverageGoal& goal) {
  auto it = status_.find(goal);
  if (it == status_.end()) throw std::logic_error("untracked goal " + goal.to_string());
  if (it->second != GoalStatus::Dormant) return;
  it->second = GoalStatus::Active;
  active_.insert(goal);
}

void ObjectiveState::cover(const cfg::CoverageGoal& goal) {
  auto it = status_.find(goal);
  if (it == status_.end()) throw std::logic_error("untracked goal " + goal.to_string());
  if (it->second == GoalStatus::Dormant) throw std::logic_error("dormant goal covered: " + goal.to_string());
  it->second = GoalStatus::Covered;
  active_.erase(goal);
  covered_.insert(goal);
}

GoalStatus ObjectiveState::status(const cfg::CoverageGoal& goal) const {
  auto it = status_.find(goal);
  if (it == status_.end()) throw std::logic_error("untracked goal " + goal.to_string());
  return it->second;
}

cfg::GoalSet ObjectiveState::dormant() const {
  cfg::GoalSet out;
  for (const auto& [g, s] : status_) {
    if (s == GoalStatus::Dormant) out.insert(g);
  }
  return out;
}

cfg::GoalSet ObjectiveState::all() const {
  cfg::GoalSet out;
  for (const auto& entry : status_) out.insert(entry.first);
  return out;
}

bool Archive::offer(const cfg::CoverageGoal& goal, const TestChromosome& test,
                    const lang::ExecutionResult& execution) {
  auto it = entries_.find(goal);
  if (it != entries_.end() && test.weight() >= it->second.test.weight()) return false;
  TestChromosome stored = test;
  stored.fitness_cache.clear();
  stored.last_execution.reset();
  entries_[goal] = ArchiveEntry{std::move(stored), execution};
  return true;
}

void SearchConfig::validate() const {
  if (population_size == 0) throw std::invalid_argument("population_size must be positive");
  if (max_evaluations == 0) throw std::invalid_argument("max_evaluations must be positive");
  if (step_budget == 0) throw std::invalid_argument("step_budget must be positive");
  if (!(crossover_rate >= 0 && crossover_rate <= 1)) throw std::invalid_argument("crossover_rate must be in [0, 1]");
  if (!(mutation_rate >= 0 && mutation_rate <= 1)) throw std::invalid_argument("mutation_rate must be in [0, 1]");
  if (mode == SearchMode::SingleLine && target_line <= 0) throw std::invalid_argument("target_line must be positive");
}

void evaluate(TestChromosome& test, const SearchContext& context, std::size_t step_budget) {
  if (test.last_execution) return;
  test.fitness_cache.clear();
  test.last_execution = lang::call(*context.program, context.uut->name, test.arguments, {step_budget});
}

const FitnessValue& fitness(TestChromosome& test, const cfg::CoverageGoal& goal, const SearchContext& context) {
  if (!test.last_execution) throw std::logic_error("fitness of an unevaluated test");
  auto it = test.fitness_cache.find(goal);
  if (it != test.fitness_cache.end()) return it->second;
  FitnessValue value = fitness(goal, *test.last_execution, *context.dependences, context.uut_id);
  return test.fitness_cache.emplace(goal, value).first->second;
}

double rank(TestChromosome& test, const ObjectiveState& objectives, const SearchContext& context) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& goal : objectives.active()) best = std::min(best, fitness(test, goal, context).combined());
  return best;
}

std::pair<TestChromosome, TestChromosome> crossover(const TestChromosome& a, const TestChromosome& b,
                                                    std::size_t point) {
  if (a.arguments.size() != b.arguments.size() || point > a.arguments.size()) {
    throw std::invalid_argument("crossover point out of range");
  }
  TestChromosome x{a.entry_function, {}, {}, {}};
  TestChromosome y{b.entry_function, {}, {}, {}};
  for (std::size_t i = 0; i < a.arguments.size(); ++i) {
    x.arguments.push_back(i < point ? a.arguments[i] : b.arguments[i]);
    y.arguments.push_back(i < point ? b.arguments[i] : a.arguments[i]);
  }
  return {std::move(x), std::move(y)};
}

void mutate(TestChromosome& test, const SearchContext& context, const SearchConfig& config, Rng& rng) {
  const auto& params = context.uut->params;
  if (params.empty()) return;
  std::size_t first = pick(rng, params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i == first || chance(rng, config.mutation_rate)) {
      test.set_argument(i, context.values->mutate(test.arguments[i], params[i].type, rng));
    }
  }
}

std::size_t tournament(std::vector<TestChromosome>& population, const ObjectiveState& objectives,
                       const SearchContext& context, Rng& rng) {
  std::size_t best = pick(rng, population.size());
  for (std::size_t k = 1; k < kTournamentSize; ++k) {
    std::size_t c = pick(rng, population.size());
    auto key = [&](std::size_t i) {
      return std::make_pair(rank(population[i], objectives, context), population[i].weight());
    };
    if (key(c) < key(best)) best = c;
  }
  return best;
}

std::vector<TestChromosome> evolve(std::vector<TestChromosome>& population, const ObjectiveState& objectives,
                                   const SearchConfig& config, const SearchContext& context, Rng& rng) {
  if (population.empty()) throw std::invalid_argument("empty population");
  std::vector<TestChromosome> next;
  std::set<std::size_t> elites;
  for (const auto& goal : objectives.active()) {
    if (elites.size() * 2 >= config.population_size) break;
    std::size_t best = 0;
    for (std::size_t i = 1; i < population.size(); ++i) {
      auto key = [&](std::size_t j) {
        return std::make_pair(fitness(population[j], goal, context).combined(), population[j].weight());
      };
      if (key(i) < key(best)) best = i;
    }
    elites.insert(best);
  }
  for (std::size_t i : elites) next.push_back(population[i]);

  const std::size_t arity = context.uut->params.size();
  while (next.size() < config.population_size) {
    const TestChromosome& a = population[tournament(population, objectives, context, rng)];
    const TestChromosome& b = population[tournament(population, objectives, context, rng)];
    TestChromosome x = a, y = b;
    if (arity >= 2 && chance(rng, config.crossover_rate)) {
      std::size_t point = 1 + pick(rng, arity - 1);
      std::tie(x, y) = crossover(a, b, point);
    }
    mutate(x, context, config, rng);
    next.push_back(std::move(x));
    if (next.size() < config.population_size) {
      mutate(y, context, config, rng);
      next.push_back(std::move(y));
    }
  }
  return next;
}

std::optional<EmittedTest> synthesize_assertions(const lang::FunctionDecl& uut,
                                                 const std::vector<lang::Value>& arguments,
                                                 const lang::ExecutionResult& execution, std::string name) {
  if (execution.outcome == lang::ExecutionResult::Outcome::StepLimitExceeded) return std::nullopt;
  const std::string call = uut.name + "(" + argument_list(arguments) + ")";
  std::string text = "test fn " + name + "() {\n";
  if (execution.normal()) {
    text += "  let r: " + lang::to_string(uut.return_type) + " = " + call + ";\n";
    text += "  assert r == " + lang::to_literal(execution.value) + ";\n";
  } else {
    text += "  expect_error " + call + ";\n";
  }
  text += "}\n";
  lang::Program parsed = lang::parse(text, "<generated>");
  EmittedTest out;
  out.name = std::move(name);
  out.decl = std::move(parsed.tests.at(0));
  out.code = lang::render(out.decl);
  out.arguments = arguments;
  return out;
}

SearchResult run_search(const lang::TypedProgram& program, std::string_view uut, const SearchConfig& config,
                        const SearchObserver& observer) {
  config.validate();
  const lang::FunctionDecl* fn = program.function_named(uut);
  if (fn == nullptr || fn->is_test) throw SearchError("unknown function '" + std::string(uut) + "'");
  const lang::FunctionId uut_id = *program.find_function(uut);

  std::optional<cfg::ControlFlowGraph> graph;
  try {
    graph = cfg::build_cfg(*fn);
  } catch (const cfg::StructuralError& e) {
    throw SearchError(e.what());
  }
  const cfg::ControlDependenceMap map = cfg::control_dependencies(*graph);

  cfg::GoalSet allowed;
  if (config.mode == SearchMode::SingleLine) {
    try {
      allowed = cfg::line_mode_filter(map, *graph, config.target_line);
    } catch (const cfg::LineNotInUnit& e) {
      throw SearchError(e.what());
    }
  } else {
    allowed.insert(map.goals().begin(), map.goals().end());
  }

  const ValueFactory values(program, constant_pool(program.program()));
  for (const auto& p : fn->params) {
    if (!values.constructible(p.type)) {
      throw SearchError("cannot construct a value of type " + lang::to_string(p.type));
    }
  }
  const SearchContext context{&program, fn, uut_id, &map, &values};

  SearchResult result;
  result.goals = allowed;
  ObjectiveState state;
  for (const auto& g : allowed) state.add_dormant(g);
  for (const auto& g : cfg::initial_objectives(map)) {
    if (allowed.count(g)) state.activate(g);
  }
  const cfg::CoverageGoal* target =
      config.mode == SearchMode::SingleLine ? map.find_line(config.target_line) : nullptr;

  auto record = [&](const TestChromosome& test) {
    const lang::ExecutionResult& exec = *test.last_execution;
    // Runs cut off by the step limit cannot become tests, so they only guide.
    if (exec.outcome == lang::ExecutionResult::Outcome::StepLimitExceeded) return;
    cfg::GoalSet newly;
    for (const auto& g : allowed) {
      if (!covers(g, exec, uut_id)) continue;
      result.archive.offer(g, test, exec);
      if (state.status(g) != GoalStatus::Covered) newly.insert(g);
    }
    for (const auto& g : newly) {
      state.activate(g);
      state.cover(g);
    }
    for (const auto& g : cfg::expand_objectives(map, newly)) {
      if (state.tracked(g)) state.activate(g);
    }
  };
  auto finished = [&] {
    if (state.active().empty()) return true;
    return target != nullptr && state.status(*target) == GoalStatus::Covered;
  };

  Rng rng(config.rng_seed);
  std::vector<TestChromosome> population;
  for (std::size_t i = 0; i < config.population_size; ++i) {
    TestChromosome c;
    c.entry_function = fn->name;
    for (const auto& p : fn->params) c.arguments.push_back(values.random(p.type, rng));
    population.push_back(std::move(c));
  }

  std::size_t evaluations = 0;
  std::size_t generations = 0;
  for (;;) {
    std::vector<TestChromosome> evaluated;
    for (auto& c : population) {
      if (!c.last_execution) {
        if (evaluations >= config.max_evaluations) continue;
        evaluate(c, context, config.step_budget);
        ++evaluations;
        record(c);
      }
      evaluated.push_back(std::move(c));
    }
    population = std::move(evaluated);
    ++generations;
    if (observer) observer(GenerationSnapshot{generations, evaluations, state.active(), state.covered()});
    // Without parameters every run is the same run.
    if (finished() || evaluations >= config.max_evaluations || fn->params.empty() || population.empty()) break;
    population = evolve(population, state, config, context, rng);
  }

  std::set<std::string> seen;
  for (const auto& [goal, entry] : result.archive.entries()) {
    if (!seen.insert(argument_list(entry.test.arguments)).second) continue;
    auto test = synthesize_assertions(*fn, entry.test.arguments, entry.execution,
                                      "test_" + fn->name + "_" + std::to_string(result.tests.size() + 1));
    if (!test) continue;
    test->goal = goal;
    result.tests.push_back(std::move(*test));
  }

  CoverageSummary& s = result.summary;
  s.total_goals = allowed.size();
  s.covered_goals = state.covered().size();
  for (const auto& g : state.covered()) {
    if (!g.is_branch()) s.covered_lines.push_back(g.line);
  }
  std::sort(s.covered_lines.begin(), s.covered_lines.end());
  s.evaluations = evaluations;
  s.generations = generations;
  s.target_covered = target != nullptr && state.status(*target) == GoalStatus::Covered;
  return result;
}

SearchResult run_search(const lang::Program& program, std::string_view uut, const SearchConfig& config,
                        const SearchObserver& observer) {
  lang::TypecheckResult checked = lang::typecheck(program);
  if (!checked.ok()) throw SearchError("project does not compile: " + checked.error_text());
  return run_search(*checked.typed, uut, config, observer);
}

}  // namespace forgespark::sbst
