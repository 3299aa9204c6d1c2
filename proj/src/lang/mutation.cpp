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

#include "forgespark/lang/mutation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "forgespark/lang/render.hpp"

namespace forgespark::lang {

const char* to_string(MutationOperator op) {
  switch (op) {
    case MutationOperator::AOR: return "AOR";
    case MutationOperator::ROR: return "ROR";
    case MutationOperator::LCR: return "LCR";
    case MutationOperator::ConstPerturb: return "ConstPerturb";
    case MutationOperator::NegateCondition: return "NegateCondition";
  }
  return "?";
}

namespace {

// Mutation sites of one function, in a fixed pre-order. Collected afresh on
// every program copy so indices line up across copies.
struct Sites {
  std::vector<Stmt*> conditions;  // if / while statements
  std::vector<Expr*> exprs;       // operator and literal nodes
};

void collect(Expr& e, Sites& sites) {
  bool eligible = e.kind == Expr::Kind::Binary || e.kind == Expr::Kind::IntLit ||
                  e.kind == Expr::Kind::BoolLit;
  if (eligible) sites.exprs.push_back(&e);
  for (auto& child : e.operands) collect(child, sites);
}

void collect(Block& block, Sites& sites) {
  for (auto& s : block) {
    if (s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::While) sites.conditions.push_back(&s);
    for (auto& e : s.exprs) collect(e, sites);
    collect(s.body, sites);
    collect(s.else_body, sites);
  }
}

FunctionDecl& find(Program& program, std::string_view name) {
  for (auto& f : program.functions) {
    if (f.name == name) return f;
  }
  throw std::invalid_argument("unknown function '" + std::string(name) + "'");
}

std::vector<BinaryOp> replacements(BinaryOp op) {
  static const BinaryOp kArith[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                    BinaryOp::Mod};
  static const BinaryOp kRel[] = {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt,
                                  BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
  std::vector<BinaryOp> out;
  if (is_arithmetic(op)) {
    for (BinaryOp r : kArith) {
      if (r != op) out.push_back(r);
    }
  } else if (is_relational(op)) {
    for (BinaryOp r : kRel) {
      if (r != op) out.push_back(r);
    }
  } else {
    out.push_back(op == BinaryOp::And ? BinaryOp::Or : BinaryOp::And);
  }
  return out;
}

std::vector<std::int64_t> perturbations(std::int64_t c) {
  std::vector<std::int64_t> out;
  auto add = [&](std::int64_t v) {
    if (v != c && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  if (c != std::numeric_limits<std::int64_t>::min()) add(c - 1);
  if (c != std::numeric_limits<std::int64_t>::max()) add(c + 1);
  add(0);
  return out;
}

}  // namespace

std::vector<Mutant> generate_mutants(const TypedProgram& program, std::string_view function) {
  const Program& original = program.program();
  Program scratch = original;
  Sites base;
  collect(find(scratch, function).body, base);

  std::vector<Mutant> out;
  auto emit = [&](MutationOperator op, int line, std::string before, Program mutated,
                  std::string after) {
    TypecheckResult checked = typecheck(std::move(mutated));
    if (!checked.ok()) return;
    Mutant m;
    m.id = out.size() + 1;
    m.op = op;
    m.function = std::string(function);
    m.line = line;
    m.original_fragment = std::move(before);
    m.mutated_fragment = std::move(after);
    m.program = std::move(*checked.typed);
    out.push_back(std::move(m));
  };

  // Walk conditions and expressions together in source order so mutant ids
  // follow line order.
  struct Site {
    int line;
    bool is_condition;
    std::size_t index;
  };
  std::vector<Site> order;
  for (std::size_t i = 0; i < base.conditions.size(); ++i) {
    order.push_back({base.conditions[i]->line, true, i});
  }
  for (std::size_t i = 0; i < base.exprs.size(); ++i) {
    order.push_back({base.exprs[i]->line, false, i});
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Site& a, const Site& b) { return a.line < b.line; });

  for (const Site& site : order) {
    if (site.is_condition) {
      const Stmt& stmt = *base.conditions[site.index];
      Program copy = original;
      Sites sites;
      collect(find(copy, function).body, sites);
      Expr& cond = sites.conditions[site.index]->exprs[0];
      Expr negated;
      negated.kind = Expr::Kind::Unary;
      negated.unary_op = UnaryOp::Not;
      negated.line = cond.line;
      negated.column = cond.column;
      negated.operands.push_back(cond);
      cond = std::move(negated);
      std::string after = render(cond);
      emit(MutationOperator::NegateCondition, stmt.line, render(stmt.exprs[0]), std::move(copy),
           std::move(after));
      continue;
    }
    const Expr& node = *base.exprs[site.index];
    auto mutate = [&](MutationOperator op, auto&& change) {
      Program copy = original;
      Sites sites;
      collect(find(copy, function).body, sites);
      Expr& target = *sites.exprs[site.index];
      change(target);
      std::string after = render(target);
      emit(op, node.line, render(node), std::move(copy), std::move(after));
    };
    if (node.kind == Expr::Kind::Binary) {
      MutationOperator op = is_arithmetic(node.binary_op)   ? MutationOperator::AOR
                            : is_relational(node.binary_op) ? MutationOperator::ROR
                                                            : MutationOperator::LCR;
      for (BinaryOp r : replacements(node.binary_op)) {
        mutate(op, [r](Expr& e) { e.binary_op = r; });
      }
    } else if (node.kind == Expr::Kind::IntLit) {
      for (std::int64_t v : perturbations(node.int_value)) {
        mutate(MutationOperator::ConstPerturb, [v](Expr& e) { e.int_value = v; });
      }
    } else {
      mutate(MutationOperator::ConstPerturb, [](Expr& e) { e.bool_value = !e.bool_value; });
    }
  }
  return out;
}

}  // namespace forgespark::lang
