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

#include "forgespark/lang/ast.hpp"

#include <algorithm>

namespace forgespark::lang {

std::string to_string(const Type& type) {
  switch (type.kind) {
    case Type::Kind::Int:
      return "int";
    case Type::Kind::Bool:
      return "bool";
    case Type::Kind::IntArray:
      return "int[]";
    case Type::Kind::Record:
      return type.record;
    case Type::Kind::Unit:
      return "unit";
    case Type::Kind::Error:
      return "<error>";
  }
  return "?";
}

const char* spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* spelling(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "!"; }

bool is_arithmetic(BinaryOp op) {
  return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul ||
         op == BinaryOp::Div || op == BinaryOp::Mod;
}

bool is_relational(BinaryOp op) {
  return op == BinaryOp::Lt || op == BinaryOp::Le || op == BinaryOp::Gt ||
         op == BinaryOp::Ge || op == BinaryOp::Eq || op == BinaryOp::Ne;
}

bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.operands.size() != b.operands.size()) return false;
  switch (a.kind) {
    case Expr::Kind::IntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case Expr::Kind::BoolLit:
      if (a.bool_value != b.bool_value) return false;
      break;
    case Expr::Kind::RecordLit:
      if (a.name != b.name || a.field_names != b.field_names) return false;
      break;
    case Expr::Kind::Var:
    case Expr::Kind::Field:
    case Expr::Kind::Call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case Expr::Kind::Binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case Expr::Kind::ArrayLit:
    case Expr::Kind::Index:
      break;
  }
  for (std::size_t i = 0; i < a.operands.size(); ++i) {
    if (!same_structure(a.operands[i], b.operands[i])) return false;
  }
  return true;
}

namespace {

bool same_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.has_else != b.has_else ||
      a.exprs.size() != b.exprs.size()) {
    return false;
  }
  if (a.kind == Stmt::Kind::Let && !(a.declared == b.declared)) return false;
  for (std::size_t i = 0; i < a.exprs.size(); ++i) {
    if (!same_structure(a.exprs[i], b.exprs[i])) return false;
  }
  return same_structure(a.body, b.body) && same_structure(a.else_body, b.else_body);
}

}  // namespace

bool same_structure(const Block& a, const Block& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_stmt);
}

bool same_structure(const FunctionDecl& a, const FunctionDecl& b) {
  if (a.name != b.name || a.is_test != b.is_test || !(a.return_type == b.return_type) ||
      a.params.size() != b.params.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name || !(a.params[i].type == b.params[i].type)) {
      return false;
    }
  }
  return same_structure(a.body, b.body);
}

bool same_structure(const RecordDecl& a, const RecordDecl& b) {
  if (a.name != b.name || a.extends != b.extends || a.fields.size() != b.fields.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    if (a.fields[i].name != b.fields[i].name || !(a.fields[i].type == b.fields[i].type)) {
      return false;
    }
  }
  return true;
}

bool same_structure(const Program& a, const Program& b) {
  auto eq = [](const auto& x, const auto& y) { return same_structure(x, y); };
  return std::equal(a.records.begin(), a.records.end(), b.records.begin(), b.records.end(), eq) &&
         std::equal(a.functions.begin(), a.functions.end(), b.functions.begin(),
                    b.functions.end(), eq) &&
         std::equal(a.tests.begin(), a.tests.end(), b.tests.begin(), b.tests.end(), eq);
}

std::size_t count_statements(const Block& block) {
  std::size_t n = 0;
  for_each_stmt(block, [&](const Stmt&) { ++n; });
  return n;
}

std::size_t count_statements(const Program& program) {
  std::size_t n = 0;
  for (const auto& f : program.functions) n += count_statements(f.body);
  for (const auto& t : program.tests) n += count_statements(t.body);
  return n;
}

std::vector<std::string> called_functions(const Block& block) {
  std::vector<std::string> names;
  for_each_expr(block, [&](const Expr& e) {
    if (e.kind == Expr::Kind::Call &&
        std::find(names.begin(), names.end(), e.name) == names.end()) {
      names.push_back(e.name);
    }
  });
  return names;
}

}  // namespace forgespark::lang
