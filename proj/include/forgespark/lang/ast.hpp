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

#ifndef FORGESPARK_LANG_AST_HPP_
#define FORGESPARK_LANG_AST_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace forgespark::lang {

struct Type {
  enum class Kind { Int, Bool, IntArray, Record, Unit, Error };

  Kind kind = Kind::Unit;
  std::string record;  // only for Kind::Record

  static Type Int() { return {Kind::Int, {}}; }
  static Type Bool() { return {Kind::Bool, {}}; }
  static Type IntArray() { return {Kind::IntArray, {}}; }
  static Type Unit() { return {Kind::Unit, {}}; }
  static Type Error() { return {Kind::Error, {}}; }
  static Type Record(std::string name) { return {Kind::Record, std::move(name)}; }

  bool is_record() const { return kind == Kind::Record; }

  friend bool operator==(const Type&, const Type&) = default;
};

std::string to_string(const Type& type);

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Neg, Not };

const char* spelling(BinaryOp op);
const char* spelling(UnaryOp op);
bool is_arithmetic(BinaryOp op);
bool is_relational(BinaryOp op);  // < <= > >= == !=
bool is_logical(BinaryOp op);

// Expression node. Children live in `operands`:
//   Field: [base]           Index: [base, index]       Call: args
//   Unary: [operand]        Binary: [lhs, rhs]
//   ArrayLit: elements      RecordLit: values parallel to field_names
struct Expr {
  enum class Kind {
    IntLit,
    BoolLit,
    ArrayLit,
    RecordLit,
    Var,
    Field,
    Index,
    Call,
    Unary,
    Binary
  };

  Kind kind = Kind::IntLit;
  int line = 0;
  int column = 0;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string name;  // variable, field, callee or record type name
  std::vector<std::string> field_names;
  BinaryOp binary_op = BinaryOp::Add;
  UnaryOp unary_op = UnaryOp::Neg;
  std::vector<Expr> operands;

  // Filled in by the typechecker.
  Type type;
};

struct Stmt;
using Block = std::vector<Stmt>;

// Statement node. Expressions live in `exprs`:
//   Let: [init]    Assign: [value]     IndexAssign: [index, value]
//   If/While: [condition]  Return: [] or [value]
//   Assert: [condition]    ExpectError: [call]   ExprStmt: [expr]
struct Stmt {
  enum class Kind {
    Let,
    Assign,
    IndexAssign,
    If,
    While,
    Return,
    Assert,
    ExpectError,
    ExprStmt
  };

  Kind kind = Kind::ExprStmt;
  int line = 0;
  std::string name;
  Type declared;
  std::vector<Expr> exprs;
  Block body;
  Block else_body;
  bool has_else = false;
};

struct Param {
  std::string name;
  Type type;
};

// Functions and tests share this shape; tests have no params and unit return.
struct FunctionDecl {
  std::string name;
  std::vector<Param> params;
  Type return_type;
  Block body;
  int first_line = 0;
  int last_line = 0;
  bool is_test = false;
  int file = 0;  // index into Program::sources
};

using TestDecl = FunctionDecl;

struct FieldDecl {
  std::string name;
  Type type;
};

struct RecordDecl {
  std::string name;
  std::optional<std::string> extends;
  std::vector<FieldDecl> fields;
  int line = 0;
  int file = 0;
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<FunctionDecl> functions;
  std::vector<TestDecl> tests;
  std::vector<std::string> sources;  // source file paths, indexed by `file`
};

// Structural equality ignores positions, file indices and type annotations.
bool same_structure(const Expr& a, const Expr& b);
bool same_structure(const Block& a, const Block& b);
bool same_structure(const FunctionDecl& a, const FunctionDecl& b);
bool same_structure(const RecordDecl& a, const RecordDecl& b);
bool same_structure(const Program& a, const Program& b);

// Statement count, recursing into nested blocks.
std::size_t count_statements(const Block& block);
std::size_t count_statements(const Program& program);

// Calls `visit(stmt)` for every statement in pre-order.
template <typename Fn>
void for_each_stmt(const Block& block, Fn&& visit) {
  for (const auto& stmt : block) {
    visit(stmt);
    for_each_stmt(stmt.body, visit);
    for_each_stmt(stmt.else_body, visit);
  }
}

template <typename Fn>
void for_each_expr(const Expr& expr, Fn&& visit) {
  visit(expr);
  for (const auto& child : expr.operands) for_each_expr(child, visit);
}

template <typename Fn>
void for_each_expr(const Block& block, Fn&& visit) {
  for_each_stmt(block, [&](const Stmt& stmt) {
    for (const auto& e : stmt.exprs) for_each_expr(e, visit);
  });
}

// Names of functions called anywhere in `block`, in first-occurrence order.
std::vector<std::string> called_functions(const Block& block);

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_AST_HPP_
