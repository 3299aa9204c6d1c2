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

#include "reference_interpreter.hpp"

#include <limits>
#include <optional>

namespace forgespark::testing {

using lang::BinaryOp;
using lang::Expr;
using lang::Stmt;

RefValue from_value(const lang::Value& value) {
  RefValue out;
  switch (value.kind) {
    case lang::Value::Kind::Unit:
      break;
    case lang::Value::Kind::Int:
      out.kind = RefValue::Kind::Int;
      out.i = value.int_value;
      break;
    case lang::Value::Kind::Bool:
      out.kind = RefValue::Kind::Bool;
      out.b = value.bool_value;
      break;
    case lang::Value::Kind::IntArray:
      out.kind = RefValue::Kind::Array;
      out.arr = value.elements;
      break;
    case lang::Value::Kind::Record:
      out.kind = RefValue::Kind::Record;
      out.type = value.record_type;
      for (std::size_t i = 0; i < value.field_names.size(); ++i) {
        out.fields[value.field_names[i]] = from_value(value.field_values[i]);
      }
      break;
  }
  return out;
}

namespace {

struct Raise {
  std::string what;
  int line;
};
struct OutOfSteps {};

using Env = std::vector<std::map<std::string, RefValue>>;  // innermost scope last

RefValue make_int(std::int64_t v) {
  RefValue r;
  r.kind = RefValue::Kind::Int;
  r.i = v;
  return r;
}

RefValue make_bool(bool v) {
  RefValue r;
  r.kind = RefValue::Kind::Bool;
  r.b = v;
  return r;
}

// Two's complement wrap via unsigned arithmetic, written independently.
std::int64_t wrap(unsigned __int128 v) { return static_cast<std::int64_t>(static_cast<std::uint64_t>(v)); }

class Walker {
 public:
  Walker(const lang::Program& p, std::size_t budget, RefResult& out)
      : program_(p), budget_(budget), out_(out) {}

  RefValue eval(const Expr& e, Env& env) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return make_int(e.int_value);
      case Expr::Kind::BoolLit: return make_bool(e.bool_value);
      case Expr::Kind::ArrayLit: {
        RefValue r;
        r.kind = RefValue::Kind::Array;
        for (const auto& el : e.operands) r.arr.push_back(eval(el, env).i);
        return r;
      }
      case Expr::Kind::RecordLit: {
        RefValue r;
        r.kind = RefValue::Kind::Record;
        r.type = e.name;
        for (std::size_t k = 0; k < e.operands.size(); ++k) {
          r.fields[e.field_names[k]] = eval(e.operands[k], env);
        }
        return r;
      }
      case Expr::Kind::Var: return *find(env, e.name);
      case Expr::Kind::Field: return eval(e.operands[0], env).fields.at(e.name);
      case Expr::Kind::Index: {
        RefValue base = eval(e.operands[0], env);
        std::int64_t k = eval(e.operands[1], env).i;
        if (k < 0 || k >= static_cast<std::int64_t>(base.arr.size())) throw Raise{"index out of range", e.line};
        return make_int(base.arr[static_cast<std::size_t>(k)]);
      }
      case Expr::Kind::Call: {
        std::vector<RefValue> args;
        for (const auto& a : e.operands) args.push_back(eval(a, env));
        if (e.name == "len") return make_int(static_cast<std::int64_t>(args[0].arr.size()));
        return call(e.name, args, e.line);
      }
      case Expr::Kind::Unary: {
        RefValue v = eval(e.operands[0], env);
        if (e.unary_op == lang::UnaryOp::Not) return make_bool(!v.b);
        return make_int(wrap(static_cast<unsigned __int128>(0) - static_cast<std::uint64_t>(v.i)));
      }
      case Expr::Kind::Binary: return binary(e, env);
    }
    return {};
  }

  RefValue call(const std::string& name, std::vector<RefValue> args, int line) {
    const lang::FunctionDecl* fn = nullptr;
    for (const auto& f : program_.functions) {
      if (f.name == name) fn = &f;
    }
    for (const auto& f : program_.tests) {
      if (f.name == name) fn = &f;
    }
    if (depth_ >= 256) throw Raise{"call depth exceeded", line};
    ++depth_;
    std::string saved = current_;
    current_ = name;
    Env env(1);
    for (std::size_t k = 0; k < fn->params.size(); ++k) env[0][fn->params[k].name] = args[k];
    std::optional<RefValue> ret;
    try {
      ret = run_block(fn->body, env);
    } catch (...) {
      current_ = saved;
      --depth_;
      throw;
    }
    current_ = saved;
    --depth_;
    return ret.value_or(RefValue{});
  }

 private:
  RefValue* find(Env& env, const std::string& name) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      auto hit = it->find(name);
      if (hit != it->end()) return &hit->second;
    }
    return nullptr;
  }

  void tick(int line) {
    if (out_.steps == budget_) throw OutOfSteps{};
    out_.steps += 1;
    out_.trace.push_back(line);
    out_.trace_functions.push_back(current_);
  }

  std::optional<RefValue> run_block(const lang::Block& block, Env& env) {
    env.emplace_back();
    for (const auto& s : block) {
      auto r = run_stmt(s, env);
      if (r) {
        env.pop_back();
        return r;
      }
    }
    env.pop_back();
    return std::nullopt;
  }

  bool condition(const Stmt& s, Env& env) {
    bool v = eval(s.exprs[0], env).b;
    out_.branches[{current_, s.line}].insert(v);
    return v;
  }

  std::optional<RefValue> run_stmt(const Stmt& s, Env& env) {
    tick(s.line);
    switch (s.kind) {
      case Stmt::Kind::Let:
        env.back()[s.name] = eval(s.exprs[0], env);
        break;
      case Stmt::Kind::Assign: {
        RefValue v = eval(s.exprs[0], env);
        *find(env, s.name) = v;
        break;
      }
      case Stmt::Kind::IndexAssign: {
        std::int64_t k = eval(s.exprs[0], env).i;
        std::int64_t v = eval(s.exprs[1], env).i;
        RefValue* arr = find(env, s.name);
        if (k < 0 || k >= static_cast<std::int64_t>(arr->arr.size())) throw Raise{"index out of range", s.line};
        arr->arr[static_cast<std::size_t>(k)] = v;
        break;
      }
      case Stmt::Kind::If:
        if (condition(s, env)) return run_block(s.body, env);
        if (s.has_else) return run_block(s.else_body, env);
        break;
      case Stmt::Kind::While:
        for (;;) {
          if (!condition(s, env)) break;
          auto r = run_block(s.body, env);
          if (r) return r;
          tick(s.line);
        }
        break;
      case Stmt::Kind::Return:
        if (s.exprs.empty()) return RefValue{};
        return eval(s.exprs[0], env);
      case Stmt::Kind::Assert:
        if (!eval(s.exprs[0], env).b) throw Raise{"assertion failed", s.line};
        break;
      case Stmt::Kind::ExpectError: {
        bool raised = false;
        try {
          eval(s.exprs[0], env);
        } catch (const Raise&) {
          raised = true;
        }
        if (!raised) throw Raise{"expected error was not raised", s.line};
        break;
      }
      case Stmt::Kind::ExprStmt:
        eval(s.exprs[0], env);
        break;
    }
    return std::nullopt;
  }

  RefValue binary(const Expr& e, Env& env) {
    if (e.binary_op == BinaryOp::And) {
      return make_bool(eval(e.operands[0], env).b ? eval(e.operands[1], env).b : false);
    }
    if (e.binary_op == BinaryOp::Or) {
      return make_bool(eval(e.operands[0], env).b ? true : eval(e.operands[1], env).b);
    }
    RefValue l = eval(e.operands[0], env);
    RefValue r = eval(e.operands[1], env);
    std::uint64_t a = static_cast<std::uint64_t>(l.i);
    std::uint64_t b = static_cast<std::uint64_t>(r.i);
    switch (e.binary_op) {
      case BinaryOp::Add: return make_int(wrap(static_cast<unsigned __int128>(a) + b));
      case BinaryOp::Sub: return make_int(wrap(static_cast<unsigned __int128>(a) - b));
      case BinaryOp::Mul: return make_int(wrap(static_cast<unsigned __int128>(a) * b));
      case BinaryOp::Div:
      case BinaryOp::Mod: {
        if (r.i == 0) throw Raise{"division by zero", e.line};
        __int128 q = static_cast<__int128>(l.i) / r.i;
        __int128 m = static_cast<__int128>(l.i) % r.i;
        return make_int(wrap(static_cast<unsigned __int128>(e.binary_op == BinaryOp::Div ? q : m)));
      }
      case BinaryOp::Lt: return make_bool(l.i < r.i);
      case BinaryOp::Le: return make_bool(l.i <= r.i);
      case BinaryOp::Gt: return make_bool(l.i > r.i);
      case BinaryOp::Ge: return make_bool(l.i >= r.i);
      case BinaryOp::Eq: return make_bool(l == r);
      case BinaryOp::Ne: return make_bool(!(l == r));
      default: return {};
    }
  }

  const lang::Program& program_;
  std::size_t budget_;
  RefResult& out_;
  std::string current_ = "<entry>";
  std::size_t depth_ = 0;
};

}  // namespace

RefResult reference_run(const lang::Program& program, const Expr& entry, std::size_t step_budget) {
  RefResult out;
  Walker walker(program, step_budget, out);
  Env env(1);
  try {
    out.value = walker.eval(entry, env);
  } catch (const Raise& r) {
    out.outcome = RefResult::Outcome::Error;
    out.error = r.what;
    out.error_line = r.line;
  } catch (const OutOfSteps&) {
    out.outcome = RefResult::Outcome::StepLimit;
  }
  return out;
}

}  // namespace forgespark::testing
