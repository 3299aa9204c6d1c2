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

#include "forgespark/lang/typecheck.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_set>
#include <utility>

namespace forgespark::lang {

std::string TypeError::to_string() const {
  return "line " + std::to_string(line) + ": " + message;
}

std::string TypecheckResult::error_text() const {
  std::string out;
  for (const auto& e : errors) {
    out += e.to_string();
    out += '\n';
  }
  return out;
}

std::optional<FunctionId> TypedProgram::find_function(std::string_view name) const {
  auto it = function_index_.find(std::string(name));
  if (it == function_index_.end()) return std::nullopt;
  return it->second;
}

const FunctionDecl* TypedProgram::function_named(std::string_view name) const {
  auto id = find_function(name);
  return id ? functions_[*id] : nullptr;
}

const RecordInfo* TypedProgram::find_record(std::string_view name) const {
  auto it = record_index_.find(std::string(name));
  return it == record_index_.end() ? nullptr : &records_[it->second];
}

bool TypedProgram::is_subtype(std::string_view sub, std::string_view super) const {
  const RecordInfo* rec = find_record(sub);
  while (rec != nullptr) {
    if (rec->name == super) return true;
    rec = rec->parent ? find_record(*rec->parent) : nullptr;
  }
  return false;
}

bool TypedProgram::is_assignable(const Type& from, const Type& to) const {
  if (from.kind == Type::Kind::Error || to.kind == Type::Kind::Error) return true;
  if (from.kind != to.kind) return false;
  if (from.kind != Type::Kind::Record) return true;
  return is_subtype(from.record, to.record);
}

std::vector<std::string> TypedProgram::concrete_types_for(std::string_view name) const {
  std::vector<std::string> out;
  for (const auto& rec : records_) {
    if (is_subtype(rec.name, name)) out.push_back(rec.name);
  }
  return out;
}

const FunctionDecl* TypedProgram::function_at_line(int line, int file) const {
  for (const FunctionDecl* fn : functions_) {
    if (fn->file == file && fn->first_line <= line && line <= fn->last_line) return fn;
  }
  return nullptr;
}

struct TypecheckAccess {
  static TypedProgram build(Program program, std::vector<RecordInfo> records) {
    TypedProgram typed;
    auto shared = std::make_shared<Program>(std::move(program));
    for (auto& fn : shared->functions) {
      typed.function_index_.emplace(fn.name, static_cast<FunctionId>(typed.functions_.size()));
      typed.functions_.push_back(&fn);
    }
    for (auto& t : shared->tests) {
      typed.function_index_.emplace(t.name, static_cast<FunctionId>(typed.functions_.size()));
      typed.functions_.push_back(&t);
    }
    typed.program_ = std::move(shared);
    for (std::size_t i = 0; i < records.size(); ++i) typed.record_index_[records[i].name] = i;
    typed.records_ = std::move(records);
    return typed;
  }
};

namespace {

class Checker {
 public:
  explicit Checker(Program& program) : program_(program) {}

  std::vector<RecordInfo> check_declarations() {
    std::unordered_set<std::string> seen;
    auto declare = [&](const std::string& name, int line, int file) {
      file_ = file;
      if (name == kLenBuiltin) {
        error(line, "name '" + name + "' is reserved");
      } else if (!seen.insert(name).second) {
        error(line, "duplicate name '" + name + "'");
      }
    };
    for (const auto& r : program_.records) declare(r.name, r.line, r.file);
    for (const auto& f : program_.functions) declare(f.name, f.first_line, f.file);
    for (const auto& t : program_.tests) declare(t.name, t.first_line, t.file);

    for (const auto& r : program_.records) {
      file_ = r.file;
      if (!record_decls_.count(r.name)) record_decls_[r.name] = &r;
    }
    for (const auto& f : program_.functions) {
      if (!function_decls_.count(f.name)) function_decls_[f.name] = &f;
    }
    for (const auto& t : program_.tests) {
      if (!function_decls_.count(t.name)) function_decls_[t.name] = &t;
    }

    std::vector<RecordInfo> infos;
    for (const auto& r : program_.records) {
      file_ = r.file;
      if (r.extends && !record_decls_.count(*r.extends)) {
        error(r.line, "unknown type '" + *r.extends + "'");
      }
      std::set<std::string> names;
      for (const auto& f : r.fields) {
        resolve(f.type, r.line);
        if (!names.insert(f.name).second) {
          error(r.line, "duplicate field '" + f.name + "' in record '" + r.name + "'");
        }
      }
    }
    // Cycle detection along extends-chains.
    for (const auto& r : program_.records) {
      file_ = r.file;
      std::set<std::string> chain{r.name};
      const RecordDecl* cur = &r;
      while (cur->extends) {
        auto it = record_decls_.find(*cur->extends);
        if (it == record_decls_.end()) break;
        if (!chain.insert(it->second->name).second) {
          if (it->second->name == r.name) {
            error(r.line, "inheritance cycle involving record '" + r.name + "'");
          }
          cyclic_.insert(r.name);
          break;
        }
        cur = it->second;
      }
    }
    for (const auto& r : program_.records) {
      file_ = r.file;
      RecordInfo info;
      info.name = r.name;
      info.parent = r.extends;
      if (!cyclic_.count(r.name)) {
        std::vector<const RecordDecl*> lineage;
        for (const RecordDecl* cur = &r; cur != nullptr;) {
          lineage.push_back(cur);
          auto it = cur->extends ? record_decls_.find(*cur->extends) : record_decls_.end();
          cur = it == record_decls_.end() ? nullptr : it->second;
        }
        std::set<std::string> inherited;
        for (auto it = lineage.rbegin(); it != lineage.rend(); ++it) {
          for (const auto& f : (*it)->fields) {
            if (*it == &r && inherited.count(f.name)) {
              error(r.line, "field '" + f.name + "' in record '" + r.name +
                                "' shadows an inherited field");
              continue;
            }
            if (*it != &r) inherited.insert(f.name);
            if (std::none_of(info.fields.begin(), info.fields.end(),
                             [&](const FieldDecl& d) { return d.name == f.name; })) {
              info.fields.push_back(f);
            }
          }
        }
      }
      infos.push_back(std::move(info));
    }
    for (const auto& r : program_.records) {
      file_ = r.file;
      if (!r.extends) continue;
      for (auto& info : infos) {
        if (info.name == *r.extends) info.direct_subtypes.push_back(r.name);
      }
    }
    infos_ = &infos;
    return infos;
  }

  void check_bodies(std::vector<RecordInfo>& infos) {
    infos_ = &infos;
    for (auto& f : program_.functions) check_function(f);
    for (auto& t : program_.tests) check_function(t);
  }

  ExpressionCheck check_standalone(Expr expr, std::vector<RecordInfo>& infos) {
    infos_ = &infos;
    scopes_.assign(1, {});
    check_expr(expr);
    ExpressionCheck out;
    out.errors = std::move(errors_);
    if (out.errors.empty()) out.expr = std::move(expr);
    return out;
  }

  std::vector<TypeError> take_errors() {
    std::stable_sort(errors_.begin(), errors_.end(),
                     [](const TypeError& a, const TypeError& b) { return std::tie(a.file, a.line) < std::tie(b.file, b.line); });
    return std::move(errors_);
  }

  void index_program(const Program& program) {
    for (const auto& r : program.records) record_decls_[r.name] = &r;
    for (const auto& f : program.functions) function_decls_[f.name] = &f;
    for (const auto& t : program.tests) function_decls_[t.name] = &t;
  }

 private:
  void error(int line, std::string message) { errors_.push_back({line, std::move(message), file_}); }

  bool resolve(const Type& type, int line) {
    if (type.kind == Type::Kind::Record && !record_decls_.count(type.record)) {
      error(line, "unknown type '" + type.record + "'");
      return false;
    }
    return true;
  }

  const RecordInfo* record(const std::string& name) const {
    for (const auto& info : *infos_) {
      if (info.name == name) return &info;
    }
    return nullptr;
  }

  bool is_subtype(const std::string& sub, const std::string& super) const {
    std::set<std::string> seen;
    const RecordInfo* rec = record(sub);
    while (rec != nullptr && seen.insert(rec->name).second) {
      if (rec->name == super) return true;
      rec = rec->parent ? record(*rec->parent) : nullptr;
    }
    return false;
  }

  bool assignable(const Type& from, const Type& to) const {
    if (from.kind == Type::Kind::Error || to.kind == Type::Kind::Error) return true;
    if (from.kind != to.kind) return false;
    if (from.kind != Type::Kind::Record) return true;
    return is_subtype(from.record, to.record);
  }

  void expect_type(const Type& found, const Type& expected, int line) {
    if (!assignable(found, expected)) {
      error(line, "expected " + to_string(expected) + ", found " + to_string(found));
    }
  }

  const Type* lookup(const std::string& name) const {
    for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope) {
      for (const auto& [n, t] : *scope) {
        if (n == name) return &t;
      }
    }
    return nullptr;
  }

  void declare(const std::string& name, const Type& type, int line) {
    if (lookup(name) != nullptr) {
      error(line, "variable '" + name + "' is already defined");
      return;
    }
    scopes_.back().emplace_back(name, type);
  }

  void check_function(FunctionDecl& fn) {
    current_ = &fn;
    file_ = fn.file;
    calls_project_function_ = false;
    scopes_.assign(1, {});
    std::set<std::string> param_names;
    for (const auto& p : fn.params) {
      resolve(p.type, fn.first_line);
      if (!param_names.insert(p.name).second) {
        error(fn.first_line, "duplicate parameter '" + p.name + "'");
        continue;
      }
      scopes_.back().emplace_back(p.name, p.type);
    }
    resolve(fn.return_type, fn.first_line);
    check_block(fn.body);
    if (!fn.is_test && !always_returns(fn.body)) {
      error(fn.last_line,
            "function '" + fn.name + "' does not return a value on every path");
    }
    if (fn.is_test && !calls_project_function_) {
      error(fn.first_line, "test '" + fn.name + "' does not call any project function");
    }
    current_ = nullptr;
  }

  static bool always_returns(const Block& block) {
    for (const auto& s : block) {
      if (s.kind == Stmt::Kind::Return) return true;
      if (s.kind == Stmt::Kind::If && s.has_else && always_returns(s.body) &&
          always_returns(s.else_body)) {
        return true;
      }
    }
    return false;
  }

  void check_block(Block& block) {
    scopes_.emplace_back();
    for (auto& s : block) check_stmt(s);
    scopes_.pop_back();
  }

  void check_stmt(Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Let: {
        Type init = check_expr(s.exprs[0]);
        if (resolve(s.declared, s.line)) expect_type(init, s.declared, s.line);
        declare(s.name, s.declared, s.line);
        return;
      }
      case Stmt::Kind::Assign: {
        Type value = check_expr(s.exprs[0]);
        const Type* var = lookup(s.name);
        if (var == nullptr) {
          error(s.line, "unknown variable '" + s.name + "'");
        } else {
          expect_type(value, *var, s.line);
        }
        return;
      }
      case Stmt::Kind::IndexAssign: {
        Type index = check_expr(s.exprs[0]);
        Type value = check_expr(s.exprs[1]);
        const Type* var = lookup(s.name);
        if (var == nullptr) {
          error(s.line, "unknown variable '" + s.name + "'");
        } else if (var->kind != Type::Kind::IntArray && var->kind != Type::Kind::Error) {
          error(s.line, "cannot index a value of type " + to_string(*var));
        }
        expect_type(index, Type::Int(), s.line);
        expect_type(value, Type::Int(), s.line);
        return;
      }
      case Stmt::Kind::If:
        expect_type(check_expr(s.exprs[0]), Type::Bool(), s.line);
        check_block(s.body);
        if (s.has_else) check_block(s.else_body);
        return;
      case Stmt::Kind::While:
        expect_type(check_expr(s.exprs[0]), Type::Bool(), s.line);
        check_block(s.body);
        return;
      case Stmt::Kind::Return:
        if (current_->is_test) {
          if (!s.exprs.empty()) {
            check_expr(s.exprs[0]);
            error(s.line, "test functions cannot return a value");
          }
        } else if (s.exprs.empty()) {
          error(s.line, "missing return value in function '" + current_->name + "'");
        } else {
          expect_type(check_expr(s.exprs[0]), current_->return_type, s.line);
        }
        return;
      case Stmt::Kind::Assert:
        expect_type(check_expr(s.exprs[0]), Type::Bool(), s.line);
        return;
      case Stmt::Kind::ExpectError:
        check_expr(s.exprs[0]);
        if (s.exprs[0].kind != Expr::Kind::Call) {
          error(s.line, "expect_error requires a call expression");
        }
        return;
      case Stmt::Kind::ExprStmt:
        check_expr(s.exprs[0]);
        return;
    }
  }

  Type check_expr(Expr& e) {
    e.type = infer(e);
    return e.type;
  }

  Type infer(Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return Type::Int();
      case Expr::Kind::BoolLit:
        return Type::Bool();
      case Expr::Kind::ArrayLit:
        for (auto& el : e.operands) expect_type(check_expr(el), Type::Int(), e.line);
        return Type::IntArray();
      case Expr::Kind::RecordLit:
        return infer_record_literal(e);
      case Expr::Kind::Var: {
        const Type* t = lookup(e.name);
        if (t == nullptr) {
          error(e.line, "unknown variable '" + e.name + "'");
          return Type::Error();
        }
        return *t;
      }
      case Expr::Kind::Field: {
        Type base = check_expr(e.operands[0]);
        if (base.kind == Type::Kind::Error) return base;
        if (base.kind != Type::Kind::Record) {
          error(e.line, "cannot access field '" + e.name + "' of type " + to_string(base));
          return Type::Error();
        }
        const RecordInfo* rec = record(base.record);
        if (rec != nullptr) {
          for (const auto& f : rec->fields) {
            if (f.name == e.name) return f.type;
          }
        }
        error(e.line, "record '" + base.record + "' has no field '" + e.name + "'");
        return Type::Error();
      }
      case Expr::Kind::Index: {
        Type base = check_expr(e.operands[0]);
        Type index = check_expr(e.operands[1]);
        expect_type(index, Type::Int(), e.line);
        if (base.kind != Type::Kind::IntArray && base.kind != Type::Kind::Error) {
          error(e.line, "cannot index a value of type " + to_string(base));
        }
        return Type::Int();
      }
      case Expr::Kind::Call:
        return infer_call(e);
      case Expr::Kind::Unary: {
        Type operand = check_expr(e.operands[0]);
        Type want = e.unary_op == UnaryOp::Neg ? Type::Int() : Type::Bool();
        expect_type(operand, want, e.line);
        return want;
      }
      case Expr::Kind::Binary:
        return infer_binary(e);
    }
    return Type::Error();
  }

  Type infer_record_literal(Expr& e) {
    for (auto& v : e.operands) check_expr(v);
    const RecordInfo* rec = record(e.name);
    if (rec == nullptr || !record_decls_.count(e.name)) {
      error(e.line, "unknown type '" + e.name + "'");
      return Type::Error();
    }
    std::set<std::string> given;
    for (std::size_t i = 0; i < e.field_names.size(); ++i) {
      const std::string& name = e.field_names[i];
      if (!given.insert(name).second) {
        error(e.line, "duplicate field '" + name + "' in literal of record '" + e.name + "'");
        continue;
      }
      auto it = std::find_if(rec->fields.begin(), rec->fields.end(),
                             [&](const FieldDecl& f) { return f.name == name; });
      if (it == rec->fields.end()) {
        error(e.line, "record '" + e.name + "' has no field '" + name + "'");
        continue;
      }
      expect_type(e.operands[i].type, it->type, e.line);
    }
    for (const auto& f : rec->fields) {
      if (!given.count(f.name)) {
        error(e.line, "missing field '" + f.name + "' in literal of record '" + e.name + "'");
      }
    }
    return Type::Record(e.name);
  }

  Type infer_call(Expr& e) {
    std::vector<Type> args;
    for (auto& a : e.operands) args.push_back(check_expr(a));
    if (e.name == kLenBuiltin) {
      if (args.size() != 1) {
        error(e.line, "function 'len' expects 1 argument, found " + std::to_string(args.size()));
      } else if (!assignable(args[0], Type::IntArray())) {
        error(e.line, "argument 1 of 'len': expected int[], found " + to_string(args[0]));
      }
      return Type::Int();
    }
    auto it = function_decls_.find(e.name);
    if (it == function_decls_.end()) {
      error(e.line, "unknown function '" + e.name + "'");
      return Type::Error();
    }
    const FunctionDecl& callee = *it->second;
    if (callee.is_test) {
      error(e.line, "cannot call test function '" + e.name + "'");
      return Type::Error();
    }
    calls_project_function_ = true;
    if (args.size() != callee.params.size()) {
      std::size_t n = callee.params.size();
      error(e.line, "function '" + e.name + "' expects " + std::to_string(n) +
                        (n == 1 ? " argument" : " arguments") + ", found " +
                        std::to_string(args.size()));
    } else {
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!assignable(args[i], callee.params[i].type)) {
          error(e.line, "argument " + std::to_string(i + 1) + " of '" + e.name +
                            "': expected " + to_string(callee.params[i].type) + ", found " +
                            to_string(args[i]));
        }
      }
    }
    return callee.return_type;
  }

  Type infer_binary(Expr& e) {
    Type lhs = check_expr(e.operands[0]);
    Type rhs = check_expr(e.operands[1]);
    BinaryOp op = e.binary_op;
    if (is_arithmetic(op)) {
      expect_type(lhs, Type::Int(), e.line);
      expect_type(rhs, Type::Int(), e.line);
      return Type::Int();
    }
    if (is_logical(op)) {
      expect_type(lhs, Type::Bool(), e.line);
      expect_type(rhs, Type::Bool(), e.line);
      return Type::Bool();
    }
    if (op == BinaryOp::Eq || op == BinaryOp::Ne) {
      bool ok = assignable(lhs, rhs) || assignable(rhs, lhs);
      if (!ok) error(e.line, "cannot compare " + to_string(lhs) + " with " + to_string(rhs));
      return Type::Bool();
    }
    expect_type(lhs, Type::Int(), e.line);
    expect_type(rhs, Type::Int(), e.line);
    return Type::Bool();
  }

  Program& program_;
  std::unordered_map<std::string, const RecordDecl*> record_decls_;
  std::unordered_map<std::string, const FunctionDecl*> function_decls_;
  std::set<std::string> cyclic_;
  std::vector<RecordInfo>* infos_ = nullptr;
  std::vector<std::vector<std::pair<std::string, Type>>> scopes_;
  const FunctionDecl* current_ = nullptr;
  int file_ = 0;
  bool calls_project_function_ = false;
  std::vector<TypeError> errors_;
};

}  // namespace

TypecheckResult typecheck(Program program) {
  TypecheckResult result;
  std::vector<RecordInfo> infos;
  {
    Checker checker(program);
    infos = checker.check_declarations();
    checker.check_bodies(infos);
    result.errors = checker.take_errors();
  }
  if (result.errors.empty()) {
    result.typed = TypecheckAccess::build(std::move(program), std::move(infos));
  }
  return result;
}

ExpressionCheck typecheck_expression(const TypedProgram& program, Expr expr) {
  Program scratch;
  Checker checker(scratch);
  checker.index_program(program.program());
  std::vector<RecordInfo> infos = program.records();
  return checker.check_standalone(std::move(expr), infos);
}

}  // namespace forgespark::lang
