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

#include "forgespark/lang/merge.hpp"

#include <algorithm>

#include "forgespark/lang/typecheck.hpp"

namespace forgespark::lang {

std::set<std::string> top_level_names(const Program& program) {
  std::set<std::string> names;
  for (const auto& r : program.records) names.insert(r.name);
  for (const auto& f : program.functions) names.insert(f.name);
  for (const auto& t : program.tests) names.insert(t.name);
  return names;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (int k = 2;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

namespace {

void rename_type(Type& t, const std::map<std::string, std::string>& renames) {
  if (t.kind != Type::Kind::Record) return;
  auto it = renames.find(t.record);
  if (it != renames.end()) t.record = it->second;
}

void rename_expr(Expr& e, const std::map<std::string, std::string>& renames) {
  if (e.kind == Expr::Kind::Call || e.kind == Expr::Kind::RecordLit) {
    auto it = renames.find(e.name);
    if (it != renames.end()) e.name = it->second;
  }
  rename_type(e.type, renames);
  for (auto& c : e.operands) rename_expr(c, renames);
}

void rename_block(Block& block, const std::map<std::string, std::string>& renames) {
  for (auto& s : block) {
    rename_type(s.declared, renames);
    for (auto& e : s.exprs) rename_expr(e, renames);
    rename_block(s.body, renames);
    rename_block(s.else_body, renames);
  }
}

void rename_function(FunctionDecl& fn, const std::map<std::string, std::string>& renames) {
  for (auto& p : fn.params) rename_type(p.type, renames);
  rename_type(fn.return_type, renames);
  rename_block(fn.body, renames);
}

}  // namespace

void rename_references(Program& program, const std::map<std::string, std::string>& renames) {
  for (auto& r : program.records) {
    if (r.extends) {
      auto it = renames.find(*r.extends);
      if (it != renames.end()) r.extends = it->second;
    }
    for (auto& f : r.fields) rename_type(f.type, renames);
  }
  for (auto& f : program.functions) rename_function(f, renames);
  for (auto& t : program.tests) rename_function(t, renames);
}

MergeOutcome merge_into(Program& target, Program incoming, int file) {
  MergeOutcome outcome;
  std::set<std::string> taken = top_level_names(target);
  taken.insert(std::string(kLenBuiltin));
  for (const auto& name : top_level_names(incoming)) taken.insert(name);

  const std::set<std::string> existing = top_level_names(target);
  std::set<std::string> dropped;
  std::map<std::string, std::string> renames;

  for (const auto& r : incoming.records) {
    if (!existing.count(r.name)) continue;
    auto same = std::find_if(target.records.begin(), target.records.end(), [&](const auto& x) {
      return x.name == r.name && same_structure(x, r);
    });
    if (same != target.records.end()) {
      dropped.insert(r.name);
    } else {
      renames[r.name] = fresh_name(r.name, taken);
      taken.insert(renames[r.name]);
    }
  }
  for (const auto& f : incoming.functions) {
    if (!existing.count(f.name)) continue;
    auto same = std::find_if(target.functions.begin(), target.functions.end(),
                             [&](const auto& x) { return x.name == f.name && same_structure(x, f); });
    if (same != target.functions.end()) {
      dropped.insert(f.name);
    } else {
      renames[f.name] = fresh_name(f.name, taken);
      taken.insert(renames[f.name]);
    }
  }
  for (const auto& t : incoming.tests) {
    if (!existing.count(t.name)) continue;
    renames[t.name] = fresh_name(t.name, taken);
    taken.insert(renames[t.name]);
  }

  rename_references(incoming, renames);
  auto final_name = [&](const std::string& n) {
    auto it = renames.find(n);
    return it == renames.end() ? n : it->second;
  };
  for (auto& r : incoming.records) {
    if (dropped.count(r.name)) {
      outcome.deduplicated.push_back(r.name);
      continue;
    }
    r.name = final_name(r.name);
    r.file = file;
    outcome.added.push_back(r.name);
    target.records.push_back(std::move(r));
  }
  for (auto& f : incoming.functions) {
    if (dropped.count(f.name)) {
      outcome.deduplicated.push_back(f.name);
      continue;
    }
    f.name = final_name(f.name);
    f.file = file;
    outcome.added.push_back(f.name);
    target.functions.push_back(std::move(f));
  }
  for (auto& t : incoming.tests) {
    t.name = final_name(t.name);
    t.file = file;
    outcome.added.push_back(t.name);
    target.tests.push_back(std::move(t));
  }
  outcome.renamed = std::move(renames);
  if (target.sources.size() <= static_cast<std::size_t>(file)) {
    target.sources.resize(static_cast<std::size_t>(file) + 1);
  }
  if (!incoming.sources.empty() && target.sources[static_cast<std::size_t>(file)].empty()) {
    target.sources[static_cast<std::size_t>(file)] = incoming.sources.front();
  }
  return outcome;
}

}  // namespace forgespark::lang
