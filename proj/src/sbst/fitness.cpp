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

#include "forgespark/sbst/fitness.hpp"

#include <algorithm>
#include <limits>

namespace forgespark::sbst {

double branch_distance(lang::BinaryOp op, const lang::Value& lhs, const lang::Value& rhs, bool desired) {
  if (lhs.kind == lang::Value::Kind::Int && rhs.kind == lang::Value::Kind::Int && lang::is_relational(op)) {
    return lang::relational_distance(op, lhs.int_value, rhs.int_value, desired);
  }
  bool holds = false;
  if (op == lang::BinaryOp::Eq) holds = lhs == rhs;
  if (op == lang::BinaryOp::Ne) holds = !(lhs == rhs);
  return holds == desired ? 0.0 : 1.0;
}

bool covers(const cfg::CoverageGoal& goal, const lang::ExecutionResult& execution, lang::FunctionId uut) {
  if (goal.is_branch()) {
    auto it = execution.branches.find(lang::BranchSite{uut, goal.line});
    if (it == execution.branches.end()) return false;
    return goal.outcome ? it->second.took_true : it->second.took_false;
  }
  for (std::size_t i = 0; i < execution.trace.size(); ++i) {
    if (execution.trace[i] == goal.line && execution.trace_functions[i] == uut) return true;
  }
  return false;
}

FitnessValue fitness(const cfg::CoverageGoal& goal, const lang::ExecutionResult& execution,
                     const cfg::ControlDependenceMap& map, lang::FunctionId uut) {
  if (covers(goal, execution, uut)) return {};
  cfg::GoalSet seen;
  cfg::GoalSet level;
  if (goal.is_branch()) {
    level.insert(goal);
  } else {
    level = map.direct(goal);
  }
  std::size_t depth = 0;
  while (!level.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : level) {
      auto it = execution.branches.find(lang::BranchSite{uut, b.line});
      if (it == execution.branches.end()) continue;
      const lang::BranchRecord& rec = it->second;
      bool taken = b.outcome ? rec.took_true : rec.took_false;
      double d = taken ? 1.0 : (b.outcome ? rec.min_distance_true : rec.min_distance_false);
      // An untaken outcome always has a positive distance; guard anyway so a
      // zero never stands for an uncovered goal.
      best = std::min(best, std::max(d, taken ? 1.0 : std::numeric_limits<double>::min()));
    }
    if (best != std::numeric_limits<double>::infinity()) return {depth, normalize(best)};
    for (const auto& b : level) seen.insert(b);
    cfg::GoalSet next;
    for (const auto& b : level) {
      for (const auto& d : map.direct(b)) {
        if (!seen.count(d)) next.insert(d);
      }
    }
    level = std::move(next);
    ++depth;
  }
  return {depth, normalize(1)};
}

}  // namespace forgespark::sbst
