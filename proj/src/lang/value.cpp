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

#include "forgespark/lang/value.hpp"

namespace forgespark::lang {

const Value* Value::field(std::string_view name) const {
  for (std::size_t i = 0; i < field_names.size(); ++i) {
    if (field_names[i] == name) return &field_values[i];
  }
  return nullptr;
}

std::size_t Value::weight() const {
  switch (kind) {
    case Kind::Unit:
      return 0;
    case Kind::Int:
    case Kind::Bool:
      return 1;
    case Kind::IntArray:
      return 1 + elements.size();
    case Kind::Record: {
      std::size_t w = 1;
      for (const auto& f : field_values) w += f.weight();
      return w;
    }
  }
  return 0;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Unit:
      return true;
    case Value::Kind::Int:
      return a.int_value == b.int_value;
    case Value::Kind::Bool:
      return a.bool_value == b.bool_value;
    case Value::Kind::IntArray:
      return a.elements == b.elements;
    case Value::Kind::Record:
      return a.record_type == b.record_type && a.field_names == b.field_names &&
             a.field_values == b.field_values;
  }
  return false;
}

std::string to_literal(const Value& value) {
  switch (value.kind) {
    case Value::Kind::Unit:
      return "()";
    case Value::Kind::Int:
      return std::to_string(value.int_value);
    case Value::Kind::Bool:
      return value.bool_value ? "true" : "false";
    case Value::Kind::IntArray: {
      std::string out = "[";
      for (std::size_t i = 0; i < value.elements.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(value.elements[i]);
      }
      return out + "]";
    }
    case Value::Kind::Record: {
      if (value.field_names.empty()) return value.record_type + " {}";
      std::string out = value.record_type + " { ";
      for (std::size_t i = 0; i < value.field_names.size(); ++i) {
        if (i > 0) out += ", ";
        out += value.field_names[i] + ": " + to_literal(value.field_values[i]);
      }
      return out + " }";
    }
  }
  return {};
}

}  // namespace forgespark::lang
