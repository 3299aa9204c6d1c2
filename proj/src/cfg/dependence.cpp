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

#include "forgespark/cfg/dependence.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace forgespark::cfg {

CoverageGoal CoverageGoal::line_goal(std::string function, int line, NodeId node) {
  CoverageGoal g;
  g.function = std::move(function);
  g.line = line;
  g.kind = Kind::Line;
  g.node = node;
  return g;
}

CoverageGoal CoverageGoal::branch_goal(std::string function, int line, NodeId node, bool outcome) {
  CoverageGoal g;
  g.function = std::move(function);
  g.line = line;
  g.kind = Kind::Branch;
  g.node = node;
  g.outcome = outcome;
  return g;
}

std::string CoverageGoal::to_string() const {
  if (kind == Kind::Line) return "line " + std::to_string(line);
  return "branch " + std::to_string(line) + (outcome ? ":true" : ":false");
}

std::vector<std::set<BranchRef>> node_control_dependence(const ControlFlowGraph& cfg,
                                                         const PostDominatorTree& pdom) {
  std::vector<std::set<BranchRef>> deps(cfg.size());
  for (NodeId b : cfg.conditional_nodes()) {
    const NodeId stop = *pdom.ipdom[b];
    for (const auto& e : cfg.out_edges(b)) {
      BranchRef ref{b, e.label == EdgeLabel::True};
      // Everything on the post-dominator chain from the successor up to, but
      // excluding, b's immediate post-dominator.
      for (NodeId runner = e.to; runner != stop; runner = *pdom.ipdom[runner]) {
        deps[runner].insert(ref);
      }
    }
  }
  return deps;
}

namespace {

const GoalSet kEmpty;

// Strongly connected components of the node-level dependence graph
// (n -> b whenever n depends on an outcome of b). Tarjan's algorithm.
std::vector<std::size_t> dependence_sccs(const std::vector<std::set<BranchRef>>& deps) {
  const std::size_t n = deps.size();
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), comp(n, SIZE_MAX);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, comps = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& ref : deps[v]) {
      std::size_t w = ref.node;
      if (index[w] == SIZE_MAX) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      for (;;) {
        std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comps;
        if (w == v) break;
      }
      ++comps;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == SIZE_MAX) visit(v);
  }
  return comp;
}

}  // namespace

ControlDependenceMap control_dependencies(const ControlFlowGraph& cfg) {
  ControlDependenceMap map;
  map.function_ = cfg.function();
  map.node_deps_ = node_control_dependence(cfg, post_dominators(cfg));

  std::set<int> seen_lines;
  for (const auto& block : cfg.blocks()) {
    for (int line : block.lines) {
      if (seen_lines.insert(line).second) {
        map.goals_.push_back(CoverageGoal::line_goal(cfg.function(), line, block.id));
      }
    }
  }
  for (NodeId b : cfg.conditional_nodes()) {
    int line = cfg.block(b).branch_line;
    map.goals_.push_back(CoverageGoal::branch_goal(cfg.function(), line, b, true));
    map.goals_.push_back(CoverageGoal::branch_goal(cfg.function(), line, b, false));
  }
  std::sort(map.goals_.begin(), map.goals_.end());

  auto branch_goal = [&](const BranchRef& ref) {
    return CoverageGoal::branch_goal(cfg.function(), cfg.block(ref.node).branch_line, ref.node,
                                     ref.outcome);
  };
  std::vector<std::size_t> scc = dependence_sccs(map.node_deps_);
  for (const auto& goal : map.goals_) {
    GoalSet direct, gating;
    for (const auto& ref : map.node_deps_[goal.node]) {
      direct.insert(branch_goal(ref));
      if (scc[ref.node] != scc[goal.node]) gating.insert(branch_goal(ref));
    }
    map.direct_[goal] = std::move(direct);
    map.gating_[goal] = std::move(gating);
  }
  return map;
}

const GoalSet& ControlDependenceMap::direct(const CoverageGoal& goal) const {
  auto it = direct_.find(goal);
  return it == direct_.end() ? kEmpty : it->second;
}

const GoalSet& ControlDependenceMap::gating(const CoverageGoal& goal) const {
  auto it = gating_.find(goal);
  return it == gating_.end() ? kEmpty : it->second;
}

GoalSet ControlDependenceMap::transitive(const CoverageGoal& goal) const {
  GoalSet out;
  std::deque<CoverageGoal> work(direct(goal).begin(), direct(goal).end());
  while (!work.empty()) {
    CoverageGoal g = work.front();
    work.pop_front();
    if (!out.insert(g).second) continue;
    for (const auto& d : direct(g)) work.push_back(d);
  }
  return out;
}

const CoverageGoal* ControlDependenceMap::find_line(int line) const {
  for (const auto& g : goals_) {
    if (g.kind == CoverageGoal::Kind::Line && g.line == line) return &g;
  }
  return nullptr;
}

const CoverageGoal* ControlDependenceMap::find_branch(int line, bool outcome) const {
  for (const auto& g : goals_) {
    if (g.is_branch() && g.line == line && g.outcome == outcome) return &g;
  }
  return nullptr;
}

GoalSet initial_objectives(const ControlDependenceMap& map) {
  GoalSet out;
  for (const auto& g : map.goals()) {
    if (map.gating(g).empty()) out.insert(g);
  }
  return out;
}

GoalSet expand_objectives(const ControlDependenceMap& map, const GoalSet& newly_covered) {
  GoalSet out;
  for (const auto& g : map.goals()) {
    for (const auto& d : map.direct(g)) {
      if (newly_covered.count(d)) {
        out.insert(g);
        break;
      }
    }
  }
  return out;
}

GoalSet line_mode_filter(const ControlDependenceMap& map, const ControlFlowGraph& cfg, int target_line) {
  const CoverageGoal* target = map.find_line(target_line);
  if (target == nullptr) throw LineNotInUnit();
  const NodeId t = target->node;

  auto flood = [&](NodeId start, bool forward) {
    std::vector<bool> mark(cfg.size(), false);
    std::deque<NodeId> work{start};
    mark[start] = true;
    while (!work.empty()) {
      NodeId n = work.front();
      work.pop_front();
      for (NodeId m : forward ? cfg.successors(n) : cfg.predecessors(n)) {
        if (!mark[m]) {
          mark[m] = true;
          work.push_back(m);
        }
      }
    }
    return mark;
  };
  std::vector<bool> from_entry = flood(cfg.entry(), true);
  std::vector<bool> reaches_target = flood(t, false);
  bool target_on_cycle = false;
  for (NodeId s : cfg.successors(t)) target_on_cycle = target_on_cycle || reaches_target[s];

  GoalSet out = map.transitive(*target);
  out.insert(*target);
  for (const auto& g : map.goals()) {
    if (!from_entry[g.node]) continue;
    if (g.is_branch()) {
      NodeId next = *cfg.successor(g.node, g.outcome ? EdgeLabel::True : EdgeLabel::False);
      if (reaches_target[next]) out.insert(g);
      continue;
    }
    if (!reaches_target[g.node]) continue;
    if (g.node != t) {
      out.insert(g);
      continue;
    }
    // Inside the target block only earlier lines run first, unless the block
    // is revisited through a loop.
    const auto& lines = cfg.block(t).lines;
    auto pos_g = std::find(lines.begin(), lines.end(), g.line);
    auto pos_t = std::find(lines.begin(), lines.end(), target_line);
    if (pos_g < pos_t || target_on_cycle) out.insert(g);
  }
  return out;
}

}  // namespace forgespark::cfg
