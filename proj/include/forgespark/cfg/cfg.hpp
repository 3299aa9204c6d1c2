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

#ifndef FORGESPARK_CFG_CFG_HPP_
#define FORGESPARK_CFG_CFG_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forgespark/lang/ast.hpp"

namespace forgespark::cfg {

using NodeId = std::size_t;

enum class EdgeLabel { Unconditional, True, False };

const char* to_string(EdgeLabel label);

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  EdgeLabel label = EdgeLabel::Unconditional;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct BasicBlock {
  NodeId id = 0;
  std::vector<int> lines;  // statement lines in execution order
  int branch_line = 0;     // line of the if/while condition ending the block, 0 if none
};

// Per-function control flow graph with a synthetic entry and a synthetic exit.
// A block ends at an if condition, a while header is a block of its own, and a
// return jumps to the exit.
class ControlFlowGraph {
 public:
  // Builds a graph directly from edges; node ids are 0..node_count-1. Used by
  // tests and for hand-made shapes. A node is conditional iff it has a True edge.
  static ControlFlowGraph from_edges(std::size_t node_count, NodeId entry, NodeId exit,
                                     std::vector<Edge> edges);

  const std::string& function() const { return function_; }
  std::size_t size() const { return blocks_.size(); }
  const std::vector<BasicBlock>& blocks() const { return blocks_; }
  const BasicBlock& block(NodeId id) const { return blocks_[id]; }
  const std::vector<Edge>& edges() const { return edges_; }
  NodeId entry() const { return entry_; }
  NodeId exit() const { return exit_; }

  std::vector<NodeId> successors(NodeId id) const;
  std::vector<NodeId> predecessors(NodeId id) const;
  const std::vector<Edge>& out_edges(NodeId id) const { return out_[id]; }
  // Target of the True/False edge of a conditional node.
  std::optional<NodeId> successor(NodeId id, EdgeLabel label) const;
  bool is_conditional(NodeId id) const;
  std::vector<NodeId> conditional_nodes() const;

  // Block holding the statement on `line`, if any.
  std::optional<NodeId> block_of_line(int line) const;
  // Conditional node whose condition sits on `line`, if any.
  std::optional<NodeId> branch_at_line(int line) const;

 private:
  friend class CfgBuilder;
  void index();

  std::string function_;
  std::vector<BasicBlock> blocks_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Edge>> out_;
  std::vector<std::vector<Edge>> in_;
  NodeId entry_ = 0;
  NodeId exit_ = 1;
};

ControlFlowGraph build_cfg(const lang::FunctionDecl& function);

class StructuralError : public std::runtime_error {
 public:
  StructuralError(std::string message, std::vector<NodeId> nodes)
      : std::runtime_error(std::move(message)), nodes_(std::move(nodes)) {}
  // Nodes from which the exit cannot be reached.
  const std::vector<NodeId>& nodes() const { return nodes_; }

 private:
  std::vector<NodeId> nodes_;
};

struct PostDominatorTree {
  // Immediate post-dominator per node; empty for the exit.
  std::vector<std::optional<NodeId>> ipdom;

  // Reflexive: every node post-dominates itself.
  bool post_dominates(NodeId p, NodeId n) const;
};

// Throws StructuralError when some node cannot reach the exit.
PostDominatorTree post_dominators(const ControlFlowGraph& cfg);

}  // namespace forgespark::cfg

#endif  // FORGESPARK_CFG_CFG_HPP_
