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

#ifndef FORGESPARK_SBST_VALUES_HPP_
#define FORGESPARK_SBST_VALUES_HPP_

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "forgespark/lang/typecheck.hpp"
#include "forgespark/lang/value.hpp"

namespace forgespark::sbst {

using Rng = std::mt19937_64;

class ValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integer literals of the program plus their neighbours, sorted and unique.
std::vector<std::int64_t> constant_pool(const lang::Program& program);

// Random generation and mutation of argument values.
class ValueFactory {
 public:
  ValueFactory(const lang::TypedProgram& program, std::vector<std::int64_t> pool);

  // A value of `type` or, for records, of a random concrete subtype.
  lang::Value random(const lang::Type& type, Rng& rng) const;
  // A value that differs from `value` whenever `type` admits another value.
  lang::Value mutate(const lang::Value& value, const lang::Type& type, Rng& rng) const;

  // Whether a finite value of `type` exists; records whose fields always
  // nest another instance of themselves have none.
  bool constructible(const lang::Type& type) const;

  const std::vector<std::int64_t>& pool() const { return pool_; }

 private:
  std::int64_t random_int(Rng& rng) const;
  std::int64_t mutate_int(std::int64_t v, Rng& rng) const;
  lang::Value random_record(const std::string& name, Rng& rng, int depth) const;
  lang::Value random_at(const lang::Type& type, Rng& rng, int depth) const;
  std::string pick_subtype(const std::string& name, Rng& rng, int depth) const;

  const lang::TypedProgram* program_;
  std::vector<std::int64_t> pool_;
  std::map<std::string, std::size_t> height_;  // absent: not constructible
};

}  // namespace forgespark::sbst

#endif  // FORGESPARK_SBST_VALUES_HPP_
