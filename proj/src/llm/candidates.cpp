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

#include "forgespark/llm/candidates.hpp"

#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "forgespark/lang/merge.hpp"
#include "forgespark/lang/parser.hpp"
#include "forgespark/lang/render.hpp"

namespace forgespark::llm {

std::string extract_code(std::string_view text) {
  std::string code;
  bool inside = false, any_fence = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    std::size_t first = line.find_first_not_of(" \t");
    bool fence = first != std::string_view::npos && line.substr(first).starts_with("```");
    if (fence) {
      any_fence = true;
      inside = !inside;
      if (inside && !code.empty()) code += "\n";
    } else if (inside) {
      code += line;
      code += "\n";
    }
    pos = end + 1;
  }
  return any_fence ? code : std::string(text);
}

namespace {

void type_refs(const lang::Type& t, std::set<std::string>& out) {
  if (t.is_record()) out.insert(t.record);
}

std::set<std::string> references(const lang::FunctionDecl& fn) {
  std::set<std::string> out;
  for (const auto& p : fn.params) type_refs(p.type, out);
  type_refs(fn.return_type, out);
  lang::for_each_stmt(fn.body, [&](const lang::Stmt& s) { type_refs(s.declared, out); });
  lang::for_each_expr(fn.body, [&](const lang::Expr& e) {
    if (e.kind == lang::Expr::Kind::Call || e.kind == lang::Expr::Kind::RecordLit) out.insert(e.name);
  });
  return out;
}

std::set<std::string> references(const lang::RecordDecl& rec) {
  std::set<std::string> out;
  if (rec.extends) out.insert(*rec.extends);
  for (const auto& f : rec.fields) type_refs(f.type, out);
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

bool is_comment(std::string_view line) {
  std::size_t first = line.find_first_not_of(" \t");
  return first != std::string_view::npos && line.substr(first).starts_with("//");
}

// The function as written, comment lines directly above it included.
std::string original_text(const std::vector<std::string_view>& lines, const lang::FunctionDecl& fn) {
  std::size_t first = static_cast<std::size_t>(fn.first_line) - 1;
  const std::size_t last = static_cast<std::size_t>(fn.last_line) - 1;
  if (last >= lines.size() || first > last) return lang::render(fn);
  while (first > 0 && is_comment(lines[first - 1])) --first;
  std::string out;
  for (std::size_t i = first; i <= last; ++i) {
    out += lines[i];
    out += "\n";
  }
  return out;
}

}  // namespace

ParsedResponse parse_response(std::string_view text) {
  const std::string code_text = extract_code(text);
  const auto lines = split_lines(code_text);
  lang::TolerantParse parsed = lang::parse_tolerant(code_text);
  ParsedResponse out;
  for (const auto& e : parsed.skipped) out.skipped.push_back("line " + std::to_string(e.line()) + ": " + e.detail());

  std::map<std::string, const lang::FunctionDecl*> helpers;
  std::map<std::string, const lang::RecordDecl*> records;
  for (const auto& fn : parsed.program.functions) helpers.emplace(fn.name, &fn);
  for (const auto& rec : parsed.program.records) records.emplace(rec.name, &rec);

  for (const auto& test : parsed.program.tests) {
    std::set<std::string> used;
    std::deque<std::string> work;
    for (const auto& r : references(test)) work.push_back(r);
    while (!work.empty()) {
      std::string name = work.front();
      work.pop_front();
      if (!used.insert(name).second) continue;
      std::set<std::string> next;
      if (auto h = helpers.find(name); h != helpers.end()) next = references(*h->second);
      if (auto r = records.find(name); r != records.end()) next = references(*r->second);
      for (const auto& n : next) work.push_back(n);
    }
    std::string code;
    for (const auto& rec : parsed.program.records) {
      if (used.count(rec.name)) code += lang::render(rec) + "\n";
    }
    for (const auto& fn : parsed.program.functions) {
      if (used.count(fn.name)) code += original_text(lines, fn) + "\n";
    }
    code += original_text(lines, test);
    out.candidates.push_back(TestCandidate{test.name, std::move(code), {}});
  }
  if (out.candidates.empty()) throw EmptyResponse();
  return out;
}

TestCandidate check_candidate(const lang::TypedProgram& program, TestCandidate candidate) {
  candidate.status = {};
  lang::Program incoming;
  try {
    incoming = lang::parse(candidate.code, "<candidate>");
  } catch (const lang::ParseError& e) {
    candidate.status.kind = CompileStatus::Kind::Fails;
    candidate.status.errors.push_back("line " + std::to_string(e.line()) + ": " + e.detail());
    return candidate;
  }
  lang::Program combined = program.program();
  lang::merge_into(combined, std::move(incoming), static_cast<int>(combined.sources.size()));
  lang::TypecheckResult checked = lang::typecheck(std::move(combined));
  if (checked.ok()) {
    candidate.status.kind = CompileStatus::Kind::Compiles;
  } else {
    candidate.status.kind = CompileStatus::Kind::Fails;
    for (const auto& e : checked.errors) candidate.status.errors.push_back(e.to_string());
  }
  return candidate;
}

std::string normalized_code(std::string_view code) {
  std::string out;
  bool space = false;
  for (char c : code) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace forgespark::llm
