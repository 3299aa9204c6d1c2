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

#ifndef FORGESPARK_SBST_FITNESS_HPP_
#define FORGESPARK_SBST_FITNESS_HPP_

#include <cmath>
#include <cstddef>

#include "forgespark/cfg/dependence.hpp"
#include "forgespark/lang/interpreter.hpp"

namespace forgespark::sbst {

struct FitnessValue {
  std::size_t approach_level = 0;
  double branch_distance = 0;  // normalized, in [0, 1)

  double combined() const { return static_cast<double>(approach_level) + branch_distance; }
  friend bool operator==(const FitnessValue&, const FitnessValue&) = default;
};

// d / (d + 1), kept below 1 even where huge distances would round up to it.
inline double normalize(double d) { return std::fmin(d / (d + 1), std::nextafter(1.0, 0.0)); }

// Korel/Tracey distance (K = 1) of `lhs op rhs` towards `desired`. Integer
// operands use the relational rules; booleans compared with == / != count 0
// when satisfied and 1 otherwise.
double branch_distance(lang::BinaryOp op, const lang::Value& lhs, const lang::Value& rhs, bool desired);

// Whether `execution` of function `uut` covers `goal`.
bool covers(const cfg::CoverageGoal& goal, const lang::ExecutionResult& execution, lang::FunctionId uut);

// Approach level plus normalized branch distance. Controlling branches are
// visited level by level: for a branch goal level 0 is the goal's own
// condition, for a line goal it is the line's direct dependences; each
// further level adds their dependences. The first level holding an evaluated
// condition decides: approach = its index, distance = the smallest distance
// towards the wanted outcome there. When that outcome was taken but the goal
// still was not reached (a runtime error got in the way) the raw distance
// counts as 1. Nothing evaluated gives approach = number of levels with
// distance normalize(1).
FitnessValue fitness(const cfg::CoverageGoal& goal, const lang::ExecutionResult& execution,
                     const cfg::ControlDependenceMap& map, lang::FunctionId uut);

}  // namespace forgespark::sbst

#endif  // FORGESPARK_SBST_FITNESS_HPP_
