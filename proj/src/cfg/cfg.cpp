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

#include "forgespark/cfg/cfg.hpp"

#include <algorithm>
#include <utility>

namespace forgespark::cfg {

const char* to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Unconditional: return "unconditional";
    case EdgeLabel::True: return "true";
    case EdgeLabel::False: return "false";
  }
  return "?";
}

void ControlFlowGraph::index() {
  out_.assign(blocks_.size(), {});
  in_.assign(blocks_.size(), {});
  for (const auto& e : edges_) {
    out_[e.from].push_back(e);
    in_[e.to].push_back(e);
  }
}

ControlFlowGraph ControlFlowGraph::from_edges(std::size_t node_count, NodeId entry, NodeId exit,
                                              std::vector<Edge> edges) {
  ControlFlowGraph g;
  g.blocks_.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) g.blocks_[i].id = i;
  g.entry_ = entry;
  g.exit_ = exit;
  g.edges_ = std::move(edges);
  g.index();
  return g;
}

std::vector<NodeId> ControlFlowGraph::successors(NodeId id) const {
  std::vector<NodeId> out;
  for (const auto& e : out_[id]) out.push_back(e.to);
  return out;
}

std::vector<NodeId> ControlFlowGraph::predecessors(NodeId id) const {
  std::vector<NodeId> out;
  for (const auto& e : in_[id]) out.push_back(e.from);
  return out;
}

std::optional<NodeId> ControlFlowGraph::successor(NodeId id, EdgeLabel label) const {
  for (const auto& e : out_[id]) {
    if (e.label == label) return e.to;
  }
  return std::nullopt;
}

bool ControlFlowGraph::is_conditional(NodeId id) const {
  return successor(id, EdgeLabel::True).has_value();
}

std::vector<NodeId> ControlFlowGraph::conditional_nodes() const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < blocks_.size(); ++n) {
    if (is_conditional(n)) out.push_back(n);
  }
  return out;
}

std::optional<NodeId> ControlFlowGraph::block_of_line(int line) const {
  for (const auto& b : blocks_) {
    if (std::find(b.lines.begin(), b.lines.end(), line) != b.lines.end()) return b.id;
  }
  return std::nullopt;
}

std::optional<NodeId> ControlFlowGraph::branch_at_line(int line) const {
  for (const auto& b : blocks_) {
    if (b.branch_line == line && line != 0) return b.id;
  }
  return std::nullopt;
}

class CfgBuilder {
 public:
  explicit CfgBuilder(const lang::FunctionDecl& fn) {
    g_.function_ = fn.name;
    g_.entry_ = make_node();
    g_.exit_ = make_node();
    pending_.push_back({g_.entry_, EdgeLabel::Unconditional});
    block(fn.body);
    for (const auto& [from, label] : open_ends()) g_.edges_.push_back({from, g_.exit_, label});
    g_.index();
  }

  ControlFlowGraph take() { return std::move(g_); }

 private:
  using End = std::pair<NodeId, EdgeLabel>;

  NodeId make_node() {
    NodeId id = g_.blocks_.size();
    g_.blocks_.push_back(BasicBlock{id, {}, 0});
    return id;
  }

  // A fresh block that receives every pending edge.
  NodeId open_block() {
    NodeId id = make_node();
    connect(pending_, id);
    pending_.clear();
    return id;
  }

  void connect(const std::vector<End>& ends, NodeId to) {
    for (const auto& [from, label] : ends) g_.edges_.push_back({from, to, label});
  }

  std::vector<End> open_ends() {
    std::vector<End> ends = pending_;
    if (current_) ends.push_back({*current_, EdgeLabel::Unconditional});
    return ends;
  }

  void add_line(int line) {
    if (!current_) current_ = open_block();
    g_.blocks_[*current_].lines.push_back(line);
  }

  void block(const lang::Block& stmts) {
    for (const auto& s : stmts) statement(s);
  }

  void statement(const lang::Stmt& s) {
    switch (s.kind) {
      case lang::Stmt::Kind::Return:
        add_line(s.line);
        g_.edges_.push_back({*current_, g_.exit_, EdgeLabel::Unconditional});
        current_.reset();
        pending_.clear();
        return;
      case lang::Stmt::Kind::If: {
        add_line(s.line);
        NodeId cond = *current_;
        g_.blocks_[cond].branch_line = s.line;
        current_.reset();
        pending_ = {{cond, EdgeLabel::True}};
        block(s.body);
        std::vector<End> joined = open_ends();
        current_.reset();
        pending_ = {{cond, EdgeLabel::False}};
        if (s.has_else) block(s.else_body);
        for (const auto& e : open_ends()) joined.push_back(e);
        current_.reset();
        pending_ = std::move(joined);
        return;
      }
      case lang::Stmt::Kind::While: {
        pending_ = open_ends();
        current_.reset();
        NodeId header = open_block();
        g_.blocks_[header].lines.push_back(s.line);
        g_.blocks_[header].branch_line = s.line;
        pending_ = {{header, EdgeLabel::True}};
        block(s.body);
        connect(open_ends(), header);
        current_.reset();
        pending_ = {{header, EdgeLabel::False}};
        return;
      }
      default:
        add_line(s.line);
        return;
    }
  }

  ControlFlowGraph g_;
  std::vector<End> pending_;
  std::optional<NodeId> current_;
};

ControlFlowGraph build_cfg(const lang::FunctionDecl& function) {
  return CfgBuilder(function).take();
}

bool PostDominatorTree::post_dominates(NodeId p, NodeId n) const {
  for (std::optional<NodeId> k = n; k; k = ipdom[*k]) {
    if (*k == p) return true;
  }
  return false;
}

PostDominatorTree post_dominators(const ControlFlowGraph& cfg) {
  const std::size_t n = cfg.size();
  // Postorder of the reverse graph, rooted at the exit.
  std::vector<std::size_t> order(n, n);
  std::vector<NodeId> postorder;
  std::vector<bool> seen(n, false);
  std::vector<std::pair<NodeId, std::size_t>> stack{{cfg.exit(), 0}};
  seen[cfg.exit()] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    auto preds = cfg.predecessors(node);
    if (next < preds.size()) {
      NodeId p = preds[next++];
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back({p, 0});
      }
    } else {
      order[node] = postorder.size();
      postorder.push_back(node);
      stack.pop_back();
    }
  }
  std::vector<NodeId> stranded;
  for (NodeId i = 0; i < n; ++i) {
    if (!seen[i]) stranded.push_back(i);
  }
  if (!stranded.empty()) {
    std::string msg = "exit not reachable from node";
    for (NodeId s : stranded) msg += " " + std::to_string(s);
    throw StructuralError(msg, stranded);
  }

  // Cooper, Harvey and Kennedy's iterative scheme on the reverse graph.
  constexpr std::size_t kUndefined = static_cast<std::size_t>(-1);
  std::vector<std::size_t> idom(n, kUndefined);
  idom[cfg.exit()] = cfg.exit();
  auto intersect = [&](NodeId a, NodeId b) {
    while (a != b) {
      while (order[a] < order[b]) a = idom[a];
      while (order[b] < order[a]) b = idom[b];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
      NodeId node = *it;
      if (node == cfg.exit()) continue;
      std::size_t candidate = kUndefined;
      for (NodeId s : cfg.successors(node)) {
        if (idom[s] == kUndefined) continue;
        candidate = candidate == kUndefined ? s : intersect(s, candidate);
      }
      if (candidate != idom[node]) {
        idom[node] = candidate;
        changed = true;
      }
    }
  }

  PostDominatorTree tree;
  tree.ipdom.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    if (i != cfg.exit()) tree.ipdom[i] = idom[i];
  }
  return tree;
}

}  // namespace forgespark::cfg
