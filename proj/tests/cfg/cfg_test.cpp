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

#include <gtest/gtest.h>

#include <algorithm>

#include "cfg_oracle.hpp"
#include "forgespark/cfg/cfg.hpp"
#include "forgespark/cfg/dependence.hpp"
#include "forgespark/lang/parser.hpp"
#include "forgespark/lang/render.hpp"
#include "lang_helpers.hpp"
#include "program_fuzzer.hpp"

namespace forgespark::cfg {
namespace {

using Kind = CoverageGoal::Kind;

lang::FunctionDecl function_of(const std::string& src) { return lang::parse(src).functions.at(0); }

std::set<std::string> names(const GoalSet& goals) {
  std::set<std::string> out;
  for (const auto& g : goals) out.insert(g.to_string());
  return out;
}

const char* kStraight =
    "fn f(x: int) -> int {\n"
    "  let y: int = x + 1;\n"
    "  y = y * 2;\n"
    "  return y;\n"
    "}\n";

const char* kDiamond =
    "fn f(x: int) -> int {\n"
    "  let y: int = 0;\n"
    "  if (x > 0) {\n"
    "    y = 1;\n"
    "  } else {\n"
    "    y = 2;\n"
    "  }\n"
    "  return y;\n"
    "}\n";

const char* kLoop =
    "fn f(n: int) -> int {\n"
    "  let i: int = 0;\n"
    "  while (i < n) {\n"
    "    i = i + 1;\n"
    "  }\n"
    "  return i;\n"
    "}\n";

const char* kNested =
    "fn f(a: int, b: int, c: int) -> int {\n"  // 1
    "  let r: int = 0;\n"                       // 2
    "  if (a > 0) {\n"                          // 3
    "    r = 1;\n"                              // 4
    "    if (b > 0) {\n"                        // 5
    "      r = 2;\n"                            // 6
    "      if (c > 0) {\n"                      // 7
    "        r = 3;\n"                          // 8
    "      }\n"                                 // 9
    "    }\n"                                   // 10
    "  }\n"                                     // 11
    "  return r;\n"                             // 12
    "}\n";

TEST(BuildCfg, StraightLine) {
  ControlFlowGraph g = build_cfg(function_of(kStraight));
  EXPECT_EQ(g.size(), 3u);
  EXPECT_TRUE(g.conditional_nodes().empty());
  for (const auto& e : g.edges()) EXPECT_EQ(e.label, EdgeLabel::Unconditional);
  auto body = g.block_of_line(2);
  ASSERT_TRUE(body);
  EXPECT_EQ(g.block(*body).lines, (std::vector<int>{2, 3, 4}));
}

TEST(BuildCfg, Diamond) {
  ControlFlowGraph g = build_cfg(function_of(kDiamond));
  auto cond = g.branch_at_line(3);
  ASSERT_TRUE(cond);
  EXPECT_EQ(g.block(*cond).lines, (std::vector<int>{2, 3}));
  NodeId then_block = *g.successor(*cond, EdgeLabel::True);
  NodeId else_block = *g.successor(*cond, EdgeLabel::False);
  EXPECT_EQ(g.block(then_block).lines, std::vector<int>{4});
  EXPECT_EQ(g.block(else_block).lines, std::vector<int>{6});
  EXPECT_EQ(g.successors(then_block), g.successors(else_block));
  NodeId join = g.successors(then_block).at(0);
  EXPECT_EQ(g.block(join).lines, std::vector<int>{8});
  EXPECT_EQ(g.successors(join), std::vector<NodeId>{g.exit()});
}

TEST(BuildCfg, WhileLoop) {
  ControlFlowGraph g = build_cfg(function_of(kLoop));
  auto header = g.branch_at_line(3);
  ASSERT_TRUE(header);
  EXPECT_EQ(g.block(*header).lines, std::vector<int>{3});
  NodeId body = *g.successor(*header, EdgeLabel::True);
  EXPECT_EQ(g.block(body).lines, std::vector<int>{4});
  EXPECT_EQ(g.successors(body), std::vector<NodeId>{*header});
  NodeId after = *g.successor(*header, EdgeLabel::False);
  EXPECT_EQ(g.block(after).lines, std::vector<int>{6});
}

TEST(BuildCfg, ReturnsJumpToExit) {
  ControlFlowGraph g = build_cfg(function_of(
      "fn f(x: int) -> int {\n  if (x > 0) {\n    return 1;\n  }\n  return 0;\n}\n"));
  NodeId cond = *g.branch_at_line(2);
  NodeId then_block = *g.successor(cond, EdgeLabel::True);
  EXPECT_EQ(g.successors(then_block), std::vector<NodeId>{g.exit()});
  EXPECT_EQ(g.predecessors(g.exit()).size(), 2u);
}

TEST(PostDominators, DiamondAndStraightLine) {
  ControlFlowGraph d = build_cfg(function_of(kDiamond));
  PostDominatorTree pd = post_dominators(d);
  NodeId cond = *d.branch_at_line(3);
  NodeId join = *d.block_of_line(8);
  EXPECT_EQ(pd.ipdom[cond], join);
  EXPECT_TRUE(pd.post_dominates(d.exit(), d.entry()));

  ControlFlowGraph s = build_cfg(function_of(kStraight));
  PostDominatorTree ps = post_dominators(s);
  for (NodeId n = 0; n < s.size(); ++n) {
    if (n == s.exit()) continue;
    ASSERT_EQ(s.successors(n).size(), 1u);
    EXPECT_EQ(ps.ipdom[n], s.successors(n)[0]);
  }
}

TEST(PostDominators, StrandedNodeIsStructuralError) {
  // Node 1 loops on itself and never reaches the exit (node 2).
  auto g = ControlFlowGraph::from_edges(3, 0, 2,
                                        {{0, 1, EdgeLabel::True}, {0, 2, EdgeLabel::False}, {1, 1, EdgeLabel::Unconditional}});
  try {
    post_dominators(g);
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_EQ(e.nodes(), std::vector<NodeId>{1});
  }
}

TEST(ControlDependence, Diamond) {
  ControlFlowGraph g = build_cfg(function_of(kDiamond));
  ControlDependenceMap m = control_dependencies(g);
  EXPECT_EQ(names(m.direct(*m.find_line(4))), std::set<std::string>{"branch 3:true"});
  EXPECT_EQ(names(m.direct(*m.find_line(6))), std::set<std::string>{"branch 3:false"});
  EXPECT_TRUE(m.direct(*m.find_line(8)).empty());
  EXPECT_TRUE(m.direct(*m.find_line(2)).empty());
}

TEST(ControlDependence, NestedIfs) {
  ControlDependenceMap m = control_dependencies(build_cfg(function_of(kNested)));
  EXPECT_EQ(names(m.direct(*m.find_line(6))), std::set<std::string>{"branch 5:true"});
  EXPECT_EQ(names(m.transitive(*m.find_line(6))), (std::set<std::string>{"branch 3:true", "branch 5:true"}));
  EXPECT_EQ(names(m.transitive(*m.find_line(8))),
            (std::set<std::string>{"branch 3:true", "branch 5:true", "branch 7:true"}));
  EXPECT_EQ(names(m.direct(*m.find_branch(5, false))), std::set<std::string>{"branch 3:true"});
}

TEST(ControlDependence, LoopSelfDependenceDoesNotGate) {
  ControlDependenceMap m = control_dependencies(build_cfg(function_of(kLoop)));
  const CoverageGoal& header = *m.find_line(3);
  EXPECT_EQ(names(m.direct(header)), std::set<std::string>{"branch 3:true"});
  EXPECT_TRUE(m.gating(header).empty());
  EXPECT_EQ(names(m.direct(*m.find_line(4))), std::set<std::string>{"branch 3:true"});
}

TEST(ControlDependence, LoopWithReturnDoesNotDeadlock) {
  const char* src =
      "fn f(n: int) -> int {\n"
      "  let i: int = 0;\n"
      "  while (i < n) {\n"
      "    if (i == 3) {\n"
      "      return 7;\n"
      "    }\n"
      "    i = i + 1;\n"
      "  }\n"
      "  return i;\n"
      "}\n";
  ControlDependenceMap m = control_dependencies(build_cfg(function_of(src)));
  GoalSet init = initial_objectives(m);
  EXPECT_TRUE(init.count(*m.find_branch(3, true)));
  EXPECT_TRUE(init.count(*m.find_branch(3, false)));
}

TEST(Objectives, StraightLineAllLines) {
  ControlDependenceMap m = control_dependencies(build_cfg(function_of(kStraight)));
  EXPECT_EQ(names(initial_objectives(m)), (std::set<std::string>{"line 2", "line 3", "line 4"}));
}

TEST(Objectives, IfElse) {
  ControlDependenceMap m = control_dependencies(build_cfg(function_of(kDiamond)));
  EXPECT_EQ(names(initial_objectives(m)),
            (std::set<std::string>{"line 2", "line 3", "branch 3:true", "branch 3:false", "line 8"}));
}

TEST(Objectives, NestedOnlyDepthZero) {
  ControlDependenceMap m = control_dependencies(build_cfg(function_of(kNested)));
  EXPECT_EQ(names(initial_objectives(m)),
            (std::set<std::string>{"line 2", "line 3", "branch 3:true", "branch 3:false", "line 12"}));
}

TEST(Objectives, ExpandOnOuterTrue) {
  ControlDependenceMap m = control_dependencies(build_cfg(function_of(kNested)));
  GoalSet activated = expand_objectives(m, {*m.find_branch(3, true)});
  EXPECT_EQ(names(activated),
            (std::set<std::string>{"line 4", "line 5", "branch 5:true", "branch 5:false"}));
  EXPECT_TRUE(expand_objectives(m, {*m.find_line(2)}).empty());
}

TEST(LineMode, InnerThenOfTwoDeepNesting) {
  const char* src =
      "fn f(a: int, b: int) -> int {\n"
      "  let r: int = 0;\n"
      "  if (a > 0) {\n"
      "    if (b > 0) {\n"
      "      r = 1;\n"
      "    }\n"
      "  }\n"
      "  return r;\n"
      "}\n";
  ControlFlowGraph g = build_cfg(function_of(src));
  ControlDependenceMap m = control_dependencies(g);
  EXPECT_EQ(names(line_mode_filter(m, g, 5)),
            (std::set<std::string>{"line 2", "line 3", "line 4", "line 5", "branch 3:true", "branch 4:true"}));
}

TEST(LineMode, EntryBlockTarget) {
  ControlFlowGraph g = build_cfg(function_of(kDiamond));
  ControlDependenceMap m = control_dependencies(g);
  EXPECT_EQ(names(line_mode_filter(m, g, 2)), std::set<std::string>{"line 2"});
}

TEST(LineMode, AfterJoinKeepsBothOutcomes) {
  ControlFlowGraph g = build_cfg(function_of(kDiamond));
  ControlDependenceMap m = control_dependencies(g);
  GoalSet f = line_mode_filter(m, g, 8);
  EXPECT_TRUE(m.transitive(*m.find_line(8)).empty());
  EXPECT_EQ(names(f), (std::set<std::string>{"line 2", "line 3", "branch 3:true", "branch 3:false", "line 4",
                                             "line 6", "line 8"}));
}

TEST(LineMode, LineOutsideUnit) {
  ControlFlowGraph g = build_cfg(function_of(kDiamond));
  ControlDependenceMap m = control_dependencies(g);
  EXPECT_THROW(line_mode_filter(m, g, 42), LineNotInUnit);
  EXPECT_THROW(line_mode_filter(m, g, 5), LineNotInUnit);  // `} else {`
}

TEST(CfgProperty, MatchesPathEnumerationOnSampledShapes) {
  std::vector<ControlFlowGraph> shapes = testing::exhaustive_shapes(3);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 600; ++i) shapes.push_back(testing::random_shape(rng, 4 + static_cast<std::size_t>(i % 7)));
  for (const auto& g : shapes) {
    auto pd = testing::brute_force_post_dominance(g);
    PostDominatorTree tree = post_dominators(g);
    for (NodeId p = 0; p < g.size(); ++p) {
      for (NodeId n = 0; n < g.size(); ++n) ASSERT_EQ(tree.post_dominates(p, n), pd[p][n]);
    }
    ASSERT_EQ(node_control_dependence(g, tree), testing::brute_force_control_dependence(g, pd));
  }
}

// Covering active branch goals one at a time eventually activates every goal,
// and a goal is only activated once one of its dependences is covered.
void check_schedule(const ControlDependenceMap& m, std::mt19937_64& rng) {
  GoalSet active = initial_objectives(m);
  GoalSet covered;
  for (const auto& g : active) ASSERT_TRUE(m.gating(g).empty());
  for (;;) {
    std::vector<CoverageGoal> open;
    for (const auto& g : active) {
      if (g.is_branch() && !covered.count(g)) open.push_back(g);
    }
    if (open.empty()) break;
    CoverageGoal pick = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    covered.insert(pick);
    for (const auto& g : expand_objectives(m, {pick})) {
      bool justified = std::any_of(m.direct(g).begin(), m.direct(g).end(),
                                   [&](const CoverageGoal& d) { return covered.count(d) > 0; });
      ASSERT_TRUE(justified) << g.to_string();
      active.insert(g);
    }
  }
  ASSERT_EQ(active.size(), m.goals().size());
}

TEST(CfgProperty, SchedulingReachesEveryGoal) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    ControlFlowGraph g = testing::random_shape(rng, 3 + static_cast<std::size_t>(i % 8));
    check_schedule(control_dependencies(g), rng);
  }
  testing::ProgramFuzzer fuzz(5);
  for (int i = 0; i < 200; ++i) {
    lang::Program p = lang::parse(lang::canonicalize(fuzz.program()));
    for (const auto& fn : p.functions) check_schedule(control_dependencies(build_cfg(fn)), rng);
  }
}

TEST(CfgProperty, BuiltGraphsAreWellFormed) {
  testing::ProgramFuzzer fuzz(8);
  for (int i = 0; i < 200; ++i) {
    lang::Program p = lang::parse(lang::canonicalize(fuzz.program()));
    for (const auto& fn : p.functions) {
      ControlFlowGraph g = build_cfg(fn);
      std::vector<int> all_lines;
      for (const auto& b : g.blocks()) all_lines.insert(all_lines.end(), b.lines.begin(), b.lines.end());
      std::vector<int> stmt_lines;
      lang::for_each_stmt(fn.body, [&](const lang::Stmt& s) { stmt_lines.push_back(s.line); });
      std::sort(all_lines.begin(), all_lines.end());
      std::sort(stmt_lines.begin(), stmt_lines.end());
      ASSERT_EQ(all_lines, stmt_lines);
      for (NodeId n = 0; n < g.size(); ++n) {
        if (g.is_conditional(n)) ASSERT_TRUE(g.successor(n, EdgeLabel::False));
      }
      ASSERT_NO_THROW(post_dominators(g));
    }
  }
}

TEST(CfgProperty, LineFilterBounds) {
  testing::ProgramFuzzer fuzz(13);
  for (int i = 0; i < 150; ++i) {
    lang::Program p = lang::parse(lang::canonicalize(fuzz.program()));
    for (const auto& fn : p.functions) {
      ControlFlowGraph g = build_cfg(fn);
      ControlDependenceMap m = control_dependencies(g);
      GoalSet all(m.goals().begin(), m.goals().end());
      for (const auto& target : m.goals()) {
        if (target.is_branch()) continue;
        GoalSet f = line_mode_filter(m, g, target.line);
        ASSERT_TRUE(f.count(target));
        for (const auto& goal : f) {
          ASSERT_TRUE(all.count(goal));
          // Every kept goal can still lead to the target block.
          std::vector<bool> seen(g.size(), false);
          std::vector<NodeId> work{goal.is_branch()
                                       ? *g.successor(goal.node, goal.outcome ? EdgeLabel::True : EdgeLabel::False)
                                       : goal.node};
          bool reaches = false;
          while (!work.empty() && !reaches) {
            NodeId n = work.back();
            work.pop_back();
            if (n == target.node) reaches = true;
            if (seen[n]) continue;
            seen[n] = true;
            for (NodeId s : g.successors(n)) work.push_back(s);
          }
          ASSERT_TRUE(reaches) << goal.to_string() << " -> " << target.to_string();
        }
        for (const auto& dep : m.transitive(target)) ASSERT_TRUE(f.count(dep));
      }
    }
  }
}

}  // namespace
}  // namespace forgespark::cfg
