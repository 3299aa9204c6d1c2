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

#ifndef FORGESPARK_CFG_DEPENDENCE_HPP_
#define FORGESPARK_CFG_DEPENDENCE_HPP_

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "forgespark/cfg/cfg.hpp"

namespace forgespark::cfg {

// A branch outcome at the CFG level.
struct BranchRef {
  NodeId node = 0;
  bool outcome = true;
  friend auto operator<=>(const BranchRef&, const BranchRef&) = default;
};

struct CoverageGoal {
  enum class Kind { Line, Branch };

  std::string function;
  int line = 0;  // the line itself, or the condition's line for a branch
  Kind kind = Kind::Line;
  NodeId node = 0;       // block holding the line, or the conditional node
  bool outcome = false;  // branch goals only

  static CoverageGoal line_goal(std::string function, int line, NodeId node);
  static CoverageGoal branch_goal(std::string function, int line, NodeId node, bool outcome);

  bool is_branch() const { return kind == Kind::Branch; }
  // "line 7" or "branch 5:true".
  std::string to_string() const;

  friend auto operator<=>(const CoverageGoal&, const CoverageGoal&) = default;
};

using GoalSet = std::set<CoverageGoal>;

// Node-level control dependence: for every node, the branch outcomes it is
// directly control-dependent on.
std::vector<std::set<BranchRef>> node_control_dependence(const ControlFlowGraph& cfg,
                                                         const PostDominatorTree& pdom);

class ControlDependenceMap {
 public:
  const std::string& function() const { return function_; }
  // Every line and branch goal of the function, sorted.
  const std::vector<CoverageGoal>& goals() const { return goals_; }
  const std::vector<std::set<BranchRef>>& node_dependence() const { return node_deps_; }

  // Branch goals `goal` is directly control-dependent on.
  const GoalSet& direct(const CoverageGoal& goal) const;
  // Transitive closure of `direct`.
  GoalSet transitive(const CoverageGoal& goal) const;
  // The part of `direct` that gates scheduling: dependences on branches in
  // the goal's own dependence cycle (loop headers and their exits) are left out.
  const GoalSet& gating(const CoverageGoal& goal) const;

  const CoverageGoal* find_line(int line) const;
  const CoverageGoal* find_branch(int line, bool outcome) const;

 private:
  friend ControlDependenceMap control_dependencies(const ControlFlowGraph& cfg);

  std::string function_;
  std::vector<CoverageGoal> goals_;
  std::vector<std::set<BranchRef>> node_deps_;
  std::map<CoverageGoal, GoalSet> direct_;
  std::map<CoverageGoal, GoalSet> gating_;
};

ControlDependenceMap control_dependencies(const ControlFlowGraph& cfg);

// Goals with nothing gating them.
GoalSet initial_objectives(const ControlDependenceMap& map);

// Goals whose direct dependences include one of the newly covered branch goals.
GoalSet expand_objectives(const ControlDependenceMap& map, const GoalSet& newly_covered);

class LineNotInUnit : public std::invalid_argument {
 public:
  LineNotInUnit() : std::invalid_argument("line not in unit") {}
};

// Goals relevant for covering `target_line`: the line itself, every branch
// outcome it transitively depends on, every branch outcome taken on some
// entry-to-target path that can still reach the target, and the lines that
// execute before the target on such a path. Throws LineNotInUnit when the
// line holds no statement of the function.
GoalSet line_mode_filter(const ControlDependenceMap& map, const ControlFlowGraph& cfg, int target_line);

}  // namespace forgespark::cfg

#endif  // FORGESPARK_CFG_DEPENDENCE_HPP_
