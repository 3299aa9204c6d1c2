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

#include "forgespark/lang/render.hpp"

#include <string>

#include "forgespark/lang/parser.hpp"

namespace forgespark::lang {

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 6;
  }
  return 0;
}

constexpr int kUnaryPrecedence = 7;
constexpr int kPostfixPrecedence = 8;

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary: return precedence(e.binary_op);
    case Expr::Kind::Unary: return kUnaryPrecedence;
    // A negative literal reads as a unary minus.
    case Expr::Kind::IntLit: return e.int_value < 0 ? kUnaryPrecedence : kPostfixPrecedence;
    default: return kPostfixPrecedence;
  }
}

void emit(const Expr& e, std::string& out);

void emit_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  emit(e, out);
  if (wrap) out += ')';
}

void emit_list(const std::vector<Expr>& items, std::string& out) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    emit(items[i], out);
  }
}

void emit(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      out += std::to_string(e.int_value);
      return;
    case Expr::Kind::BoolLit:
      out += e.bool_value ? "true" : "false";
      return;
    case Expr::Kind::ArrayLit:
      out += '[';
      emit_list(e.operands, out);
      out += ']';
      return;
    case Expr::Kind::RecordLit:
      out += e.name;
      if (e.operands.empty()) {
        out += " {}";
        return;
      }
      out += " { ";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i > 0) out += ", ";
        out += e.field_names[i];
        out += ": ";
        emit(e.operands[i], out);
      }
      out += " }";
      return;
    case Expr::Kind::Var:
      out += e.name;
      return;
    case Expr::Kind::Field:
      emit_wrapped(e.operands[0], precedence(e.operands[0]) < kPostfixPrecedence, out);
      out += '.';
      out += e.name;
      return;
    case Expr::Kind::Index:
      emit_wrapped(e.operands[0], precedence(e.operands[0]) < kPostfixPrecedence, out);
      out += '[';
      emit(e.operands[1], out);
      out += ']';
      return;
    case Expr::Kind::Call:
      out += e.name;
      out += '(';
      emit_list(e.operands, out);
      out += ')';
      return;
    case Expr::Kind::Unary: {
      const Expr& operand = e.operands[0];
      out += spelling(e.unary_op);
      // `-5` would re-parse as a literal and `--x` as nothing valid.
      bool wrap = precedence(operand) < kUnaryPrecedence ||
                  (e.unary_op == UnaryOp::Neg &&
                   (operand.kind == Expr::Kind::IntLit ||
                    (operand.kind == Expr::Kind::Unary && operand.unary_op == UnaryOp::Neg)));
      emit_wrapped(operand, wrap, out);
      return;
    }
    case Expr::Kind::Binary: {
      int prec = precedence(e.binary_op);
      emit_wrapped(e.operands[0], precedence(e.operands[0]) < prec, out);
      out += ' ';
      out += spelling(e.binary_op);
      out += ' ';
      emit_wrapped(e.operands[1], precedence(e.operands[1]) <= prec, out);
      return;
    }
  }
}

void indent(int depth, std::string& out) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void emit_block(const Block& block, int depth, std::string& out);

void emit_stmt(const Stmt& s, int depth, std::string& out) {
  indent(depth, out);
  switch (s.kind) {
    case Stmt::Kind::Let:
      out += "let " + s.name + ": " + to_string(s.declared) + " = ";
      emit(s.exprs[0], out);
      out += ";\n";
      return;
    case Stmt::Kind::Assign:
      out += s.name + " = ";
      emit(s.exprs[0], out);
      out += ";\n";
      return;
    case Stmt::Kind::IndexAssign:
      out += s.name + "[";
      emit(s.exprs[0], out);
      out += "] = ";
      emit(s.exprs[1], out);
      out += ";\n";
      return;
    case Stmt::Kind::If:
      out += "if (";
      emit(s.exprs[0], out);
      out += ") {\n";
      emit_block(s.body, depth + 1, out);
      indent(depth, out);
      if (s.has_else) {
        out += "} else {\n";
        emit_block(s.else_body, depth + 1, out);
        indent(depth, out);
      }
      out += "}\n";
      return;
    case Stmt::Kind::While:
      out += "while (";
      emit(s.exprs[0], out);
      out += ") {\n";
      emit_block(s.body, depth + 1, out);
      indent(depth, out);
      out += "}\n";
      return;
    case Stmt::Kind::Return:
      out += "return";
      if (!s.exprs.empty()) {
        out += ' ';
        emit(s.exprs[0], out);
      }
      out += ";\n";
      return;
    case Stmt::Kind::Assert:
      out += "assert ";
      emit(s.exprs[0], out);
      out += ";\n";
      return;
    case Stmt::Kind::ExpectError:
      out += "expect_error ";
      emit(s.exprs[0], out);
      out += ";\n";
      return;
    case Stmt::Kind::ExprStmt:
      emit(s.exprs[0], out);
      out += ";\n";
      return;
  }
}

void emit_block(const Block& block, int depth, std::string& out) {
  for (const auto& s : block) emit_stmt(s, depth, out);
}

}  // namespace

std::string render(const Expr& expr) {
  std::string out;
  emit(expr, out);
  return out;
}

std::string render_signature(const FunctionDecl& fn) {
  std::string out = fn.is_test ? "test fn " : "fn ";
  out += fn.name + "(";
  for (std::size_t i = 0; i < fn.params.size(); ++i) {
    if (i > 0) out += ", ";
    out += fn.params[i].name + ": " + to_string(fn.params[i].type);
  }
  out += ")";
  if (!fn.is_test) out += " -> " + to_string(fn.return_type);
  return out;
}

std::string render(const FunctionDecl& fn) {
  std::string out = render_signature(fn) + " {\n";
  emit_block(fn.body, 1, out);
  out += "}\n";
  return out;
}

std::string render(const RecordDecl& rec) {
  std::string out = "record " + rec.name;
  if (rec.extends) out += " extends " + *rec.extends;
  out += " {\n";
  for (const auto& f : rec.fields) out += "  " + f.name + ": " + to_string(f.type) + ";\n";
  out += "}\n";
  return out;
}

std::string render_record_inline(const RecordDecl& rec) {
  std::string out = "record " + rec.name;
  if (rec.extends) out += " extends " + *rec.extends;
  out += " {";
  for (const auto& f : rec.fields) out += " " + f.name + ": " + to_string(f.type) + ";";
  out += " }";
  return out;
}

std::string render(const Program& program) {
  std::string out;
  auto separate = [&] {
    if (!out.empty()) out += '\n';
  };
  for (const auto& r : program.records) {
    separate();
    out += render(r);
  }
  for (const auto& f : program.functions) {
    separate();
    out += render(f);
  }
  for (const auto& t : program.tests) {
    separate();
    out += render(t);
  }
  return out;
}

std::string canonicalize(std::string_view source) { return render(parse(source)); }

}  // namespace forgespark::lang
