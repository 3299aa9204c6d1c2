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

#include "forgespark/sbst/values.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>

namespace forgespark::sbst {

namespace {

constexpr int kMaxDepth = 4;
constexpr std::size_t kMaxArrayLength = 6;

template <typename T>
T uniform(Rng& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

std::int64_t wrapping_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

}  // namespace

std::vector<std::int64_t> constant_pool(const lang::Program& program) {
  std::set<std::int64_t> pool{0, 1, -1};
  auto collect = [&](const lang::FunctionDecl& fn) {
    lang::for_each_expr(fn.body, [&](const lang::Expr& e) {
      if (e.kind != lang::Expr::Kind::IntLit) return;
      pool.insert(e.int_value);
      pool.insert(wrapping_add(e.int_value, 1));
      pool.insert(wrapping_add(e.int_value, -1));
      pool.insert(wrapping_add(0, -static_cast<std::uint64_t>(e.int_value)));
    });
  };
  for (const auto& fn : program.functions) collect(fn);
  return {pool.begin(), pool.end()};
}

ValueFactory::ValueFactory(const lang::TypedProgram& program, std::vector<std::int64_t> pool)
    : program_(&program), pool_(std::move(pool)) {
  // Smallest nesting height of any value of each record, by fixpoint.
  auto field_height = [&](const lang::Type& t) -> std::optional<std::size_t> {
    if (!t.is_record()) return 0;
    std::optional<std::size_t> best;
    for (const auto& sub : program_->concrete_types_for(t.record)) {
      auto it = height_.find(sub);
      if (it != height_.end() && (!best || it->second < *best)) best = it->second;
    }
    return best;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& rec : program_->records()) {
      std::size_t h = 1;
      bool ok = true;
      for (const auto& f : rec.fields) {
        auto fh = field_height(f.type);
        if (!fh) {
          ok = false;
          break;
        }
        h = std::max(h, *fh + 1);
      }
      if (!ok) continue;
      auto it = height_.find(rec.name);
      if (it == height_.end() || h < it->second) {
        height_[rec.name] = h;
        changed = true;
      }
    }
  }
}

bool ValueFactory::constructible(const lang::Type& type) const {
  if (!type.is_record()) return type.kind != lang::Type::Kind::Unit && type.kind != lang::Type::Kind::Error;
  for (const auto& sub : program_->concrete_types_for(type.record)) {
    if (height_.count(sub)) return true;
  }
  return false;
}

std::int64_t ValueFactory::random_int(Rng& rng) const {
  double roll = std::uniform_real_distribution<double>(0, 1)(rng);
  if (roll < 0.45 && !pool_.empty()) return pool_[uniform<std::size_t>(rng, 0, pool_.size() - 1)];
  if (roll < 0.9) return uniform<std::int64_t>(rng, -100, 100);
  return uniform<std::int64_t>(rng, -1000000, 1000000);
}

std::int64_t ValueFactory::mutate_int(std::int64_t v, Rng& rng) const {
  std::int64_t out = v;
  switch (uniform(rng, 0, 3)) {
    case 0:
      out = wrapping_add(v, chance(rng, 0.5) ? 1 : -1);
      break;
    case 1: {
      std::int64_t step = uniform<std::int64_t>(rng, 1, 20);
      out = wrapping_add(v, chance(rng, 0.5) ? step : -step);
      break;
    }
    case 2:
      if (!pool_.empty()) out = pool_[uniform<std::size_t>(rng, 0, pool_.size() - 1)];
      break;
    default:
      out = random_int(rng);
      break;
  }
  return out == v ? wrapping_add(v, 1) : out;
}

std::string ValueFactory::pick_subtype(const std::string& name, Rng& rng, int depth) const {
  std::vector<std::string> options;
  for (const auto& sub : program_->concrete_types_for(name)) {
    if (height_.count(sub)) options.push_back(sub);
  }
  if (options.empty()) throw ValueError("cannot construct a value of type " + name);
  if (depth >= kMaxDepth) {
    // Past the depth limit only the flattest subtypes are used, so every
    // recursion strictly shrinks the remaining height.
    std::size_t lowest = std::numeric_limits<std::size_t>::max();
    for (const auto& o : options) lowest = std::min(lowest, height_.at(o));
    std::erase_if(options, [&](const std::string& o) { return height_.at(o) != lowest; });
  }
  return options[uniform<std::size_t>(rng, 0, options.size() - 1)];
}

lang::Value ValueFactory::random_record(const std::string& name, Rng& rng, int depth) const {
  const lang::RecordInfo* info = program_->find_record(name);
  lang::Value out;
  out.kind = lang::Value::Kind::Record;
  out.record_type = name;
  for (const auto& f : info->fields) {
    out.field_names.push_back(f.name);
    out.field_values.push_back(random_at(f.type, rng, depth + 1));
  }
  return out;
}

lang::Value ValueFactory::random_at(const lang::Type& type, Rng& rng, int depth) const {
  switch (type.kind) {
    case lang::Type::Kind::Int:
      return lang::Value::Int(random_int(rng));
    case lang::Type::Kind::Bool:
      return lang::Value::Bool(chance(rng, 0.5));
    case lang::Type::Kind::IntArray: {
      std::vector<std::int64_t> elems(uniform<std::size_t>(rng, 0, kMaxArrayLength - 1));
      for (auto& e : elems) e = random_int(rng);
      return lang::Value::Array(std::move(elems));
    }
    case lang::Type::Kind::Record:
      return random_record(pick_subtype(type.record, rng, depth), rng, depth);
    default:
      throw ValueError("cannot construct a value of type " + lang::to_string(type));
  }
}

lang::Value ValueFactory::random(const lang::Type& type, Rng& rng) const { return random_at(type, rng, 0); }

lang::Value ValueFactory::mutate(const lang::Value& value, const lang::Type& type, Rng& rng) const {
  lang::Value out = value;
  switch (value.kind) {
    case lang::Value::Kind::Int:
      out.int_value = mutate_int(value.int_value, rng);
      return out;
    case lang::Value::Kind::Bool:
      out.bool_value = !value.bool_value;
      return out;
    case lang::Value::Kind::IntArray: {
      auto& e = out.elements;
      int op = uniform(rng, 0, 2);
      if (e.empty()) op = 0;
      if (op == 0 && e.size() >= kMaxArrayLength) op = 1;
      if (op == 0) {
        e.insert(e.begin() + static_cast<std::ptrdiff_t>(uniform<std::size_t>(rng, 0, e.size())), random_int(rng));
      } else if (op == 1) {
        e.erase(e.begin() + static_cast<std::ptrdiff_t>(uniform<std::size_t>(rng, 0, e.size() - 1)));
      } else {
        auto& slot = e[uniform<std::size_t>(rng, 0, e.size() - 1)];
        slot = mutate_int(slot, rng);
      }
      return out;
    }
    case lang::Value::Kind::Record: {
      bool has_fields = !value.field_values.empty();
      if (has_fields && chance(rng, 0.7)) {
        std::size_t i = uniform<std::size_t>(rng, 0, value.field_values.size() - 1);
        const lang::RecordInfo* info = program_->find_record(value.record_type);
        out.field_values[i] = mutate(value.field_values[i], info->fields[i].type, rng);
        return out;
      }
      // Swap to a fresh instance; a few retries cover the case where the
      // fresh instance happens to equal the old one.
      for (int attempt = 0; attempt < 8; ++attempt) {
        out = random_at(type, rng, 0);
        if (!(out == value)) return out;
      }
      if (has_fields) {
        const lang::RecordInfo* info = program_->find_record(value.record_type);
        out = value;
        out.field_values[0] = mutate(value.field_values[0], info->fields[0].type, rng);
      }
      return out;
    }
    default:
      return out;
  }
}

}  // namespace forgespark::sbst
