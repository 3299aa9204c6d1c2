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

#ifndef FORGESPARK_LANG_VALUE_HPP_
#define FORGESPARK_LANG_VALUE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace forgespark::lang {

// Runtime value with by-value semantics. Records carry their dynamic type
// name and every field, inherited ones included, in layout order.
struct Value {
  enum class Kind { Unit, Int, Bool, IntArray, Record };

  Kind kind = Kind::Unit;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::vector<std::int64_t> elements;
  std::string record_type;
  std::vector<std::string> field_names;
  std::vector<Value> field_values;

  static Value Unit() { return {}; }
  static Value Int(std::int64_t v) {
    Value out;
    out.kind = Kind::Int;
    out.int_value = v;
    return out;
  }
  static Value Bool(bool v) {
    Value out;
    out.kind = Kind::Bool;
    out.bool_value = v;
    return out;
  }
  static Value Array(std::vector<std::int64_t> v) {
    Value out;
    out.kind = Kind::IntArray;
    out.elements = std::move(v);
    return out;
  }

  const Value* field(std::string_view name) const;

  // Number of scalar leaves; used as a size measure for chromosomes.
  std::size_t weight() const;

  friend bool operator==(const Value& a, const Value& b);
};

// MiniLang literal syntax: `-3`, `true`, `[1, 2]`, `Cat { lives: 9 }`.
std::string to_literal(const Value& value);

}  // namespace forgespark::lang

#endif  // FORGESPARK_LANG_VALUE_HPP_
