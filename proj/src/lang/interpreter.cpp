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

#include "forgespark/lang/interpreter.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "forgespark/lang/parser.hpp"

namespace forgespark::lang {

const char* to_string(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::DivisionByZero: return "division by zero";
    case RuntimeErrorKind::IndexOutOfRange: return "index out of range";
    case RuntimeErrorKind::AssertionFailed: return "assertion failed";
    case RuntimeErrorKind::ExpectedErrorNotRaised: return "expected error was not raised";
    case RuntimeErrorKind::CallDepthExceeded: return "call depth exceeded";
  }
  return "runtime error";
}

std::string ExecutionResult::describe() const {
  switch (outcome) {
    case Outcome::Normal:
      return "ok";
    case Outcome::RuntimeError:
      return std::string(to_string(error_kind)) + " at line " + std::to_string(error_line);
    case Outcome::StepLimitExceeded:
      return "step limit exceeded";
  }
  return {};
}

double relational_distance(BinaryOp op, std::int64_t lhs, std::int64_t rhs, bool desired) {
  // Differences in double: int64 subtraction may overflow.
  const double a = static_cast<double>(lhs);
  const double b = static_cast<double>(rhs);
  switch (op) {
    case BinaryOp::Lt:
      if (desired) return lhs < rhs ? 0 : (a - b) + 1;
      return lhs >= rhs ? 0 : (b - a);
    case BinaryOp::Le:
      if (desired) return lhs <= rhs ? 0 : (a - b);
      return lhs > rhs ? 0 : (b - a) + 1;
    case BinaryOp::Gt:
      if (desired) return lhs > rhs ? 0 : (b - a) + 1;
      return lhs <= rhs ? 0 : (a - b);
    case BinaryOp::Ge:
      if (desired) return lhs >= rhs ? 0 : (b - a);
      return lhs < rhs ? 0 : (a - b) + 1;
    case BinaryOp::Eq:
      if (desired) return lhs < rhs ? b - a : a - b;
      return lhs != rhs ? 0 : 1;
    case BinaryOp::Ne:
      if (desired) return lhs != rhs ? 0 : 1;
      return lhs < rhs ? b - a : a - b;
    default:
      return 0;
  }
}

namespace {

struct Fault {
  RuntimeErrorKind kind;
  int line;
};

struct StepLimit {};

struct Condition {
  bool value;
  double to_true;
  double to_false;
};

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

class Machine {
 public:
  Machine(const TypedProgram& program, const InterpretOptions& options, ExecutionResult& out)
      : program_(program), options_(options), out_(out) {}

  Value invoke(FunctionId id, std::vector<Value> args, int call_line) {
    if (depth_ >= kMaxCallDepth) throw Fault{RuntimeErrorKind::CallDepthExceeded, call_line};
    const FunctionDecl& fn = program_.function(id);
    Frame frame(*this, id);
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      vars_.emplace_back(&fn.params[i].name, std::move(args[i]));
    }
    Value result;
    if (exec_block(fn.body, result)) return result;
    return Value::Unit();
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return Value::Int(e.int_value);
      case Expr::Kind::BoolLit:
        return Value::Bool(e.bool_value);
      case Expr::Kind::ArrayLit: {
        std::vector<std::int64_t> items;
        items.reserve(e.operands.size());
        for (const auto& el : e.operands) items.push_back(eval(el).int_value);
        return Value::Array(std::move(items));
      }
      case Expr::Kind::RecordLit:
        return eval_record(e);
      case Expr::Kind::Var:
        return *lookup(e.name);
      case Expr::Kind::Field: {
        Value base = eval(e.operands[0]);
        const Value* f = base.field(e.name);
        return f != nullptr ? *f : Value::Unit();
      }
      case Expr::Kind::Index: {
        Value base = eval(e.operands[0]);
        std::int64_t idx = eval(e.operands[1]).int_value;
        if (idx < 0 || static_cast<std::size_t>(idx) >= base.elements.size()) {
          throw Fault{RuntimeErrorKind::IndexOutOfRange, e.line};
        }
        return Value::Int(base.elements[static_cast<std::size_t>(idx)]);
      }
      case Expr::Kind::Call:
        return eval_call(e);
      case Expr::Kind::Unary: {
        Value v = eval(e.operands[0]);
        if (e.unary_op == UnaryOp::Neg) return Value::Int(wrap_sub(0, v.int_value));
        return Value::Bool(!v.bool_value);
      }
      case Expr::Kind::Binary:
        return eval_binary(e);
    }
    return Value::Unit();
  }

 private:
  // Pushes a call frame; restores variables and depth on exit, including
  // unwinding through a Fault.
  class Frame {
   public:
    Frame(Machine& m, FunctionId id)
        : m_(m), saved_vars_(m.vars_.size()), saved_base_(m.frame_base_), saved_fn_(m.current_) {
      m_.frame_base_ = m_.vars_.size();
      m_.current_ = id;
      ++m_.depth_;
    }
    ~Frame() {
      m_.vars_.resize(saved_vars_);
      m_.frame_base_ = saved_base_;
      m_.current_ = saved_fn_;
      --m_.depth_;
    }
    Frame(const Frame&) = delete;
    Frame& operator=(const Frame&) = delete;

   private:
    Machine& m_;
    std::size_t saved_vars_;
    std::size_t saved_base_;
    FunctionId saved_fn_;
  };

  class Scope {
   public:
    explicit Scope(Machine& m) : m_(m), saved_(m.vars_.size()) {}
    ~Scope() { m_.vars_.resize(saved_); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Machine& m_;
    std::size_t saved_;
  };

  void step(int line) {
    if (out_.steps >= options_.step_budget) throw StepLimit{};
    ++out_.steps;
    out_.trace.push_back(line);
    out_.trace_functions.push_back(current_);
  }

  Value* lookup(const std::string& name) {
    for (std::size_t i = vars_.size(); i > frame_base_; --i) {
      if (*vars_[i - 1].first == name) return &vars_[i - 1].second;
    }
    // The typechecker guarantees every variable resolves.
    throw std::logic_error("unbound variable '" + name + "'");
  }

  // Returns true when a `return` was executed; `result` then holds the value.
  bool exec_block(const Block& block, Value& result) {
    Scope scope(*this);
    for (const auto& s : block) {
      if (exec(s, result)) return true;
    }
    return false;
  }

  bool exec(const Stmt& s, Value& result) {
    step(s.line);
    switch (s.kind) {
      case Stmt::Kind::Let:
        vars_.emplace_back(&s.name, eval(s.exprs[0]));
        return false;
      case Stmt::Kind::Assign:
        *lookup(s.name) = eval(s.exprs[0]);
        return false;
      case Stmt::Kind::IndexAssign: {
        std::int64_t idx = eval(s.exprs[0]).int_value;
        Value v = eval(s.exprs[1]);
        Value* arr = lookup(s.name);
        if (idx < 0 || static_cast<std::size_t>(idx) >= arr->elements.size()) {
          throw Fault{RuntimeErrorKind::IndexOutOfRange, s.line};
        }
        arr->elements[static_cast<std::size_t>(idx)] = v.int_value;
        return false;
      }
      case Stmt::Kind::If:
        if (branch(s)) return exec_block(s.body, result);
        if (s.has_else) return exec_block(s.else_body, result);
        return false;
      case Stmt::Kind::While:
        while (branch(s)) {
          if (exec_block(s.body, result)) return true;
          step(s.line);
        }
        return false;
      case Stmt::Kind::Return:
        result = s.exprs.empty() ? Value::Unit() : eval(s.exprs[0]);
        return true;
      case Stmt::Kind::Assert:
        if (!eval(s.exprs[0]).bool_value) throw Fault{RuntimeErrorKind::AssertionFailed, s.line};
        return false;
      case Stmt::Kind::ExpectError: {
        bool raised = false;
        try {
          eval(s.exprs[0]);
        } catch (const Fault&) {
          raised = true;
        }
        if (!raised) throw Fault{RuntimeErrorKind::ExpectedErrorNotRaised, s.line};
        return false;
      }
      case Stmt::Kind::ExprStmt:
        eval(s.exprs[0]);
        return false;
    }
    return false;
  }

  // Evaluates an if/while condition and records its outcome and distances.
  bool branch(const Stmt& s) {
    Condition c = condition(s.exprs[0]);
    BranchRecord& rec = out_.branches[BranchSite{current_, s.line}];
    bool first = !rec.took_true && !rec.took_false;
    if (first || c.to_true < rec.min_distance_true) rec.min_distance_true = c.to_true;
    if (first || c.to_false < rec.min_distance_false) rec.min_distance_false = c.to_false;
    (c.value ? rec.took_true : rec.took_false) = true;
    return c.value;
  }

  Condition condition(const Expr& e) {
    if (e.kind == Expr::Kind::Unary && e.unary_op == UnaryOp::Not) {
      Condition inner = condition(e.operands[0]);
      return {!inner.value, inner.to_false, inner.to_true};
    }
    if (e.kind == Expr::Kind::Binary) {
      if (e.binary_op == BinaryOp::And) {
        Condition l = condition(e.operands[0]);
        // An operand skipped by short-circuiting counts as distance 1.
        if (!l.value) return {false, l.to_true + 1, 0};
        Condition r = condition(e.operands[1]);
        return {r.value, l.to_true + r.to_true, std::min(l.to_false, r.to_false)};
      }
      if (e.binary_op == BinaryOp::Or) {
        Condition l = condition(e.operands[0]);
        if (l.value) return {true, 0, l.to_false + 1};
        Condition r = condition(e.operands[1]);
        return {r.value, std::min(l.to_true, r.to_true), l.to_false + r.to_false};
      }
      if (is_relational(e.binary_op) && e.operands[0].type.kind == Type::Kind::Int) {
        std::int64_t a = eval(e.operands[0]).int_value;
        std::int64_t b = eval(e.operands[1]).int_value;
        bool v = compare(e.binary_op, a, b);
        return {v, relational_distance(e.binary_op, a, b, true),
                relational_distance(e.binary_op, a, b, false)};
      }
    }
    bool v = eval(e).bool_value;
    return {v, v ? 0.0 : 1.0, v ? 1.0 : 0.0};
  }

  static bool compare(BinaryOp op, std::int64_t a, std::int64_t b) {
    switch (op) {
      case BinaryOp::Lt: return a < b;
      case BinaryOp::Le: return a <= b;
      case BinaryOp::Gt: return a > b;
      case BinaryOp::Ge: return a >= b;
      case BinaryOp::Eq: return a == b;
      case BinaryOp::Ne: return a != b;
      default: return false;
    }
  }

  Value eval_binary(const Expr& e) {
    BinaryOp op = e.binary_op;
    if (op == BinaryOp::And) {
      if (!eval(e.operands[0]).bool_value) return Value::Bool(false);
      return Value::Bool(eval(e.operands[1]).bool_value);
    }
    if (op == BinaryOp::Or) {
      if (eval(e.operands[0]).bool_value) return Value::Bool(true);
      return Value::Bool(eval(e.operands[1]).bool_value);
    }
    Value lhs = eval(e.operands[0]);
    Value rhs = eval(e.operands[1]);
    switch (op) {
      case BinaryOp::Add: return Value::Int(wrap_add(lhs.int_value, rhs.int_value));
      case BinaryOp::Sub: return Value::Int(wrap_sub(lhs.int_value, rhs.int_value));
      case BinaryOp::Mul: return Value::Int(wrap_mul(lhs.int_value, rhs.int_value));
      case BinaryOp::Div:
      case BinaryOp::Mod: {
        if (rhs.int_value == 0) throw Fault{RuntimeErrorKind::DivisionByZero, e.line};
        if (lhs.int_value == std::numeric_limits<std::int64_t>::min() && rhs.int_value == -1) {
          return Value::Int(op == BinaryOp::Div ? lhs.int_value : 0);
        }
        return Value::Int(op == BinaryOp::Div ? lhs.int_value / rhs.int_value
                                              : lhs.int_value % rhs.int_value);
      }
      case BinaryOp::Eq: return Value::Bool(lhs == rhs);
      case BinaryOp::Ne: return Value::Bool(!(lhs == rhs));
      default: return Value::Bool(compare(op, lhs.int_value, rhs.int_value));
    }
  }

  Value eval_record(const Expr& e) {
    const RecordInfo* info = program_.find_record(e.name);
    Value out;
    out.kind = Value::Kind::Record;
    out.record_type = e.name;
    // Evaluate in source order, store in layout order.
    std::vector<Value> given;
    given.reserve(e.operands.size());
    for (const auto& v : e.operands) given.push_back(eval(v));
    for (const auto& f : info->fields) {
      auto it = std::find(e.field_names.begin(), e.field_names.end(), f.name);
      out.field_names.push_back(f.name);
      out.field_values.push_back(std::move(given[static_cast<std::size_t>(it - e.field_names.begin())]));
    }
    return out;
  }

  Value eval_call(const Expr& e) {
    std::vector<Value> args;
    args.reserve(e.operands.size());
    for (const auto& a : e.operands) args.push_back(eval(a));
    if (e.name == kLenBuiltin) {
      return Value::Int(static_cast<std::int64_t>(args[0].elements.size()));
    }
    return invoke(*program_.find_function(e.name), std::move(args), e.line);
  }

  const TypedProgram& program_;
  const InterpretOptions& options_;
  ExecutionResult& out_;
  std::vector<std::pair<const std::string*, Value>> vars_;
  std::size_t frame_base_ = 0;
  FunctionId current_ = 0;
  std::size_t depth_ = 0;
};

template <typename Body>
ExecutionResult run(const TypedProgram& program, const InterpretOptions& options, Body body) {
  ExecutionResult out;
  Machine machine(program, options, out);
  try {
    out.value = body(machine);
    out.outcome = ExecutionResult::Outcome::Normal;
  } catch (const Fault& f) {
    out.outcome = ExecutionResult::Outcome::RuntimeError;
    out.error_kind = f.kind;
    out.error_line = f.line;
  } catch (const StepLimit&) {
    out.outcome = ExecutionResult::Outcome::StepLimitExceeded;
  }
  return out;
}

}  // namespace

ExecutionResult call(const TypedProgram& program, std::string_view function,
                     std::span<const Value> args, const InterpretOptions& options) {
  auto id = program.find_function(function);
  if (!id) throw std::invalid_argument("unknown function '" + std::string(function) + "'");
  if (program.function(*id).params.size() != args.size()) {
    throw std::invalid_argument("wrong number of arguments for '" + std::string(function) + "'");
  }
  return run(program, options, [&](Machine& m) {
    return m.invoke(*id, std::vector<Value>(args.begin(), args.end()), 0);
  });
}

ExecutionResult interpret(const TypedProgram& program, const Expr& entry,
                          const InterpretOptions& options) {
  return run(program, options, [&](Machine& m) { return m.eval(entry); });
}

ExecutionResult interpret(const TypedProgram& program, std::string_view entry,
                          const InterpretOptions& options) {
  ExpressionCheck checked = typecheck_expression(program, parse_expression(entry));
  if (!checked.expr) {
    std::string message;
    for (const auto& err : checked.errors) message += err.message + "\n";
    throw std::invalid_argument(message);
  }
  return interpret(program, *checked.expr, options);
}

}  // namespace forgespark::lang
