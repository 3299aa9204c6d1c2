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

#include "program_fuzzer.hpp"

#include <algorithm>

namespace forgespark::testing {

namespace {

constexpr int kOr = 0;
constexpr int kAnd = 1;
constexpr int kEquality = 2;
constexpr int kRelational = 3;
constexpr int kAdditive = 4;
constexpr int kMultiplicative = 5;
constexpr int kUnary = 6;
constexpr int kAtom = 7;

}  // namespace

ProgramFuzzer::ProgramFuzzer(std::uint64_t seed, FuzzOptions options)
    : rng_(seed), options_(options) {}

int ProgramFuzzer::pick(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

bool ProgramFuzzer::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

std::string ProgramFuzzer::indent(int depth) const {
  return std::string(static_cast<std::size_t>(depth) * 2, ' ');
}

const ProgramFuzzer::Rec* ProgramFuzzer::record(const std::string& name) const {
  for (const auto& r : records_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

bool ProgramFuzzer::is_subtype(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  const Rec* r = record(sub);
  if (r == nullptr || r->parent.empty()) return false;
  return is_subtype(r->parent, super);
}

std::vector<std::string> ProgramFuzzer::subtypes_of(const std::string& name) const {
  std::vector<std::string> out;
  for (const auto& r : records_) {
    if (is_subtype(r.name, name)) out.push_back(r.name);
  }
  return out;
}

std::string ProgramFuzzer::random_type(bool allow_record) {
  int n = allow_record && !records_.empty() ? 4 : 3;
  switch (pick(0, n - 1)) {
    case 0: return "int";
    case 1: return "bool";
    case 2: return "int[]";
    default: return records_[static_cast<std::size_t>(pick(0, static_cast<int>(records_.size()) - 1))].name;
  }
}

std::string ProgramFuzzer::wrap(const Gen& g, int min_prec) {
  if (g.prec < min_prec || (g.prec < kAtom && chance(0.1))) return "(" + g.text + ")";
  return g.text;
}

ProgramFuzzer::Gen ProgramFuzzer::literal(const std::string& type, int depth) {
  if (type == "int") {
    std::int64_t v;
    int kind = pick(0, 9);
    if (kind < 7) {
      v = pick(-10, 10);
    } else if (kind < 9) {
      v = std::uniform_int_distribution<std::int64_t>(-1000000000000LL, 1000000000000LL)(rng_);
    } else {
      v = chance(0.5) ? 9223372036854775807LL : -9223372036854775807LL;
    }
    return {std::to_string(v), v < 0 ? kUnary : kAtom};
  }
  if (type == "bool") return {chance(0.5) ? "true" : "false", kAtom};
  if (type == "int[]") {
    std::string text = "[";
    int n = chance(0.1) ? 0 : pick(1, 4);
    for (int i = 0; i < n; ++i) {
      if (i > 0) text += ", ";
      text += depth < options_.max_expr_depth ? expr("int", depth + 1).text : literal("int", depth).text;
    }
    return {text + "]", kAtom};
  }
  // Past the depth limit only the exact type is used: its fields refer to
  // strictly earlier records, so construction terminates.
  auto subs = depth > options_.max_expr_depth + 2 ? std::vector<std::string>{type} : subtypes_of(type);
  const Rec* r = record(subs[static_cast<std::size_t>(pick(0, static_cast<int>(subs.size()) - 1))]);
  auto fields = r->fields;
  if (chance(0.3)) std::shuffle(fields.begin(), fields.end(), rng_);
  std::string text = r->name + " {";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    text += i == 0 ? " " : ", ";
    std::string value = depth < options_.max_expr_depth ? expr(fields[i].second, depth + 1).text
                                                        : literal(fields[i].second, depth + 1).text;
    text += fields[i].first + ": " + value;
  }
  text += fields.empty() ? "}" : " }";
  return {text, kAtom};
}

ProgramFuzzer::Gen ProgramFuzzer::expr(const std::string& type, int depth) {
  std::vector<const Var*> candidates;
  for (const auto& v : vars_) {
    bool fits = v.type == type || (record(type) != nullptr && is_subtype(v.type, type));
    if (fits) candidates.push_back(&v);
  }
  bool leaf = depth >= options_.max_expr_depth || chance(0.3);
  if (leaf) {
    if (!candidates.empty() && chance(0.6)) {
      return {candidates[static_cast<std::size_t>(pick(0, static_cast<int>(candidates.size()) - 1))]->name,
              kAtom};
    }
    return literal(type, depth);
  }

  // Calls to earlier functions whose result fits.
  std::vector<const Sig*> calls;
  for (std::size_t i = 0; i < callable_; ++i) {
    const Sig& s = functions_[i];
    if (s.ret == type || (record(type) != nullptr && record(s.ret) != nullptr && is_subtype(s.ret, type))) {
      calls.push_back(&s);
    }
  }
  // Fields that fit, reached through some record-typed base.
  std::vector<std::pair<std::string, std::string>> fields;  // (record, field)
  for (const auto& r : records_) {
    for (const auto& [fname, ftype] : r.fields) {
      bool fits = ftype == type || (record(type) != nullptr && record(ftype) != nullptr && is_subtype(ftype, type));
      if (fits) fields.emplace_back(r.name, fname);
    }
  }

  int choice = pick(0, 9);
  if (choice == 0 && !calls.empty()) {
    const Sig* s = calls[static_cast<std::size_t>(pick(0, static_cast<int>(calls.size()) - 1))];
    std::string text = s->name + "(";
    for (std::size_t i = 0; i < s->params.size(); ++i) {
      if (i > 0) text += ", ";
      text += expr(s->params[i], depth + 1).text;
    }
    return {text + ")", kAtom};
  }
  if (choice == 1 && !fields.empty()) {
    auto [rname, fname] = fields[static_cast<std::size_t>(pick(0, static_cast<int>(fields.size()) - 1))];
    Gen base = expr(rname, depth + 1);
    return {wrap(base, kAtom) + "." + fname, kAtom};
  }
  if (choice == 2 && !candidates.empty()) {
    return {candidates[static_cast<std::size_t>(pick(0, static_cast<int>(candidates.size()) - 1))]->name, kAtom};
  }

  if (type == "int") {
    switch (pick(0, 6)) {
      case 0: {
        Gen inner = expr("int", depth + 1);
        return {"-" + wrap(inner, kUnary + 1), kUnary};
      }
      case 1:
        return {"len(" + expr("int[]", depth + 1).text + ")", kAtom};
      case 2: {
        Gen base = expr("int[]", depth + 1);
        std::string index = chance(0.8) ? "0" : expr("int", depth + 1).text;
        return {wrap(base, kAtom) + "[" + index + "]", kAtom};
      }
      default: {
        static const char* kOps[] = {"+", "-", "*", "/", "%"};
        int op = pick(0, 4);
        int prec = op < 2 ? kAdditive : kMultiplicative;
        Gen l = expr("int", depth + 1);
        Gen r = expr("int", depth + 1);
        // Divisors stay mostly nonzero so most runs get past them.
        std::string rhs = op >= 3 && chance(0.8) ? std::to_string(pick(1, 9)) : wrap(r, prec + 1);
        return {wrap(l, prec) + " " + kOps[op] + " " + rhs, prec};
      }
    }
  }
  if (type == "bool") {
    switch (pick(0, 5)) {
      case 0: {
        Gen inner = expr("bool", depth + 1);
        return {"!" + wrap(inner, kUnary + 1), kUnary};
      }
      case 1:
      case 2: {
        int op = pick(0, 1);
        int prec = op == 0 ? kAnd : kOr;
        Gen l = expr("bool", depth + 1);
        Gen r = expr("bool", depth + 1);
        return {wrap(l, prec) + (op == 0 ? " && " : " || ") + wrap(r, prec + 1), prec};
      }
      case 3: {
        std::string t = chance(0.7) ? "int" : random_type(false);
        Gen l = expr(t, depth + 1);
        Gen r = expr(t, depth + 1);
        return {wrap(l, kEquality) + (chance(0.5) ? " == " : " != ") + wrap(r, kEquality + 1), kEquality};
      }
      default: {
        static const char* kOps[] = {"<", "<=", ">", ">="};
        Gen l = expr("int", depth + 1);
        Gen r = expr("int", depth + 1);
        return {wrap(l, kRelational) + " " + kOps[pick(0, 3)] + " " + wrap(r, kRelational + 1),
                kRelational};
      }
    }
  }
  return literal(type, depth);
}

std::string ProgramFuzzer::statement(int depth, int indent_level, const std::string& ret) {
  const std::string pad = indent(indent_level);
  std::vector<const Var*> assignable;
  std::vector<const Var*> arrays;
  for (const auto& v : vars_) {
    if (!v.assignable) continue;
    assignable.push_back(&v);
    if (v.type == "int[]") arrays.push_back(&v);
  }
  std::vector<const Sig*> unit_calls;
  for (std::size_t i = 0; i < callable_; ++i) unit_calls.push_back(&functions_[i]);

  int choice = pick(0, 13);
  if (choice >= 12) choice = pick(6, 8);
  if (choice <= 2) {
    std::string type = random_type(true);
    std::string name = "v" + std::to_string(counter_++);
    std::string init = expr(type, 0).text;
    vars_.push_back({name, type, true});
    return pad + "let " + name + ": " + type + " = " + init + ";\n";
  }
  if (choice <= 4 && !assignable.empty()) {
    const Var* v = assignable[static_cast<std::size_t>(pick(0, static_cast<int>(assignable.size()) - 1))];
    return pad + v->name + " = " + expr(v->type, 0).text + ";\n";
  }
  if (choice == 5 && !arrays.empty()) {
    const Var* v = arrays[static_cast<std::size_t>(pick(0, static_cast<int>(arrays.size()) - 1))];
    std::string index = chance(0.8) ? "0" : expr("int", 1).text;
    return pad + v->name + "[" + index + "] = " + expr("int", 1).text + ";\n";
  }
  if ((choice == 6 || choice == 7) && depth < options_.max_block_depth) {
    std::string out = pad + "if (" + expr("bool", 0).text + ") {\n";
    block(out, depth + 1, indent_level + 1, ret, false);
    if (chance(0.5)) {
      out += pad + "} else {\n";
      block(out, depth + 1, indent_level + 1, ret, false);
    }
    return out + pad + "}\n";
  }
  if (choice == 8 && options_.allow_loops && depth < options_.max_block_depth) {
    std::string counter = "w" + std::to_string(counter_++);
    std::string out = pad + "let " + counter + ": int = 0;\n";
    vars_.push_back({counter, "int", false});
    std::string cond = counter + " < " + std::to_string(pick(0, 4));
    if (chance(0.4)) cond += " && " + wrap(expr("bool", 1), kAnd + 1);
    out += pad + "while (" + cond + ") {\n";
    std::string body;
    block(body, depth + 1, indent_level + 1, ret, false);
    out += body;
    out += indent(indent_level + 1) + counter + " = " + counter + " + 1;\n";
    return out + pad + "}\n";
  }
  if (choice == 9 && !unit_calls.empty()) {
    const Sig* s = unit_calls[static_cast<std::size_t>(pick(0, static_cast<int>(unit_calls.size()) - 1))];
    std::string text = s->name + "(";
    for (std::size_t i = 0; i < s->params.size(); ++i) {
      if (i > 0) text += ", ";
      text += expr(s->params[i], 1).text;
    }
    return pad + text + ");\n";
  }
  if (choice == 10 && chance(0.3)) {
    return pad + "assert " + expr("bool", 1).text + ";\n";
  }
  std::string type = random_type(true);
  std::string name = "v" + std::to_string(counter_++);
  std::string init = literal(type, 1).text;
  vars_.push_back({name, type, true});
  return pad + "let " + name + ": " + type + " = " + init + ";\n";
}

void ProgramFuzzer::block(std::string& out, int depth, int indent_level, const std::string& ret,
                          bool must_return) {
  std::size_t scope = vars_.size();
  int n = pick(depth == 0 ? 2 : 0, 5 - depth);
  for (int i = 0; i < n; ++i) {
    if (chance(0.05)) out += indent(indent_level) + "// note\n";
    out += statement(depth, indent_level, ret);
    if (chance(0.03)) out += "\n";
  }
  bool early_return = !must_return && ret != "unit" && chance(0.2);
  if (must_return || early_return) {
    out += indent(indent_level) + "return " + expr(ret, 0).text + ";\n";
  }
  vars_.resize(scope);
}

std::string ProgramFuzzer::program() {
  records_.clear();
  functions_.clear();
  callable_ = 0;
  vars_.clear();
  counter_ = 0;
  std::string out;

  int record_count = pick(0, options_.max_records);
  for (int i = 0; i < record_count; ++i) {
    Rec r;
    r.name = "R" + std::to_string(i);
    if (i > 0 && chance(0.5)) {
      const Rec& parent = records_[static_cast<std::size_t>(pick(0, i - 1))];
      r.parent = parent.name;
      r.fields = parent.fields;
    }
    std::string text = "record " + r.name;
    if (!r.parent.empty()) text += " extends " + r.parent;
    text += " {";
    int field_count = pick(r.parent.empty() ? 1 : 0, 2);
    for (int j = 0; j < field_count; ++j) {
      std::string fname = "f" + std::to_string(i) + "_" + std::to_string(j);
      std::string ftype = random_type(true);
      r.fields.emplace_back(fname, ftype);
      text += chance(0.5) ? "\n  " : " ";
      text += fname + ": " + ftype + ";";
    }
    text += chance(0.5) ? "\n}\n\n" : " }\n\n";
    out += text;
    records_.push_back(std::move(r));
  }

  int function_count = pick(1, options_.max_functions);
  for (int i = 0; i < function_count; ++i) {
    Sig sig;
    sig.name = "fn" + std::to_string(i);
    sig.ret = random_type(true);
    int param_count = pick(0, 3);
    std::string text = "fn " + sig.name + "(";
    for (int j = 0; j < param_count; ++j) {
      std::string ptype = random_type(true);
      std::string pname = "p" + std::to_string(j);
      if (j > 0) text += ", ";
      text += pname + ": " + ptype;
      sig.params.push_back(ptype);
      vars_.push_back({pname, ptype, true});
    }
    text += ") -> " + sig.ret + " {\n";
    callable_ = functions_.size();
    block(text, 0, 1, sig.ret, true);
    text += "}\n\n";
    vars_.clear();
    out += text;
    functions_.push_back(std::move(sig));
  }
  callable_ = functions_.size();

  int test_count = pick(0, options_.max_tests);
  for (int i = 0; i < test_count; ++i) {
    const Sig& target = functions_[static_cast<std::size_t>(pick(0, static_cast<int>(functions_.size()) - 1))];
    std::string call = target.name + "(";
    for (std::size_t j = 0; j < target.params.size(); ++j) {
      if (j > 0) call += ", ";
      call += literal(target.params[j], 1).text;
    }
    call += ")";
    out += "test fn test_case" + std::to_string(i) + "() {\n";
    if (chance(0.3)) {
      out += "  expect_error " + call + ";\n";
    } else {
      out += "  let r: " + target.ret + " = " + call + ";\n";
      out += "  assert r == r;\n";
    }
    out += "}\n\n";
  }
  return out;
}

std::string ProgramFuzzer::entry_call() {
  if (functions_.empty()) return {};
  vars_.clear();
  const Sig& target = functions_[static_cast<std::size_t>(pick(0, static_cast<int>(functions_.size()) - 1))];
  std::string call = target.name + "(";
  for (std::size_t j = 0; j < target.params.size(); ++j) {
    if (j > 0) call += ", ";
    call += literal(target.params[j], 1).text;
  }
  return call + ")";
}

}  // namespace forgespark::testing
