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

#ifndef FORGESPARK_TESTS_SUPPORT_LLM_FIXTURES_HPP_
#define FORGESPARK_TESTS_SUPPORT_LLM_FIXTURES_HPP_

#include <string>
#include <vector>

namespace forgespark::testing {

// Project used by the feedback-loop tests.
inline constexpr const char* kLlmProject =
    "record Animal { legs: int; }\n"
    "record Cat extends Animal { lives: int; }\n"
    "fn inc(x: int) -> int {\n"
    "  return x + 1;\n"
    "}\n"
    "fn feed(a: Animal) -> int {\n"
    "  return inc(a.legs);\n"
    "}\n";

inline std::string fenced(const std::string& code) { return "Here are the tests.\n\n```minilang\n" + code + "```\n"; }

inline constexpr const char* kGoodInc1 = "test fn test_inc_zero() {\n  assert inc(0) == 1;\n}\n";
inline constexpr const char* kGoodInc2 = "test fn test_inc_neg() {\n  assert inc(-1) == 0;\n}\n";
inline constexpr const char* kGoodFeed =
    "test fn test_feed_cat() {\n  assert feed(Cat { legs: 4, lives: 9 }) == 5;\n}\n";
inline constexpr const char* kBadUnknown = "test fn test_incr() {\n  assert incr(1) == 2;\n}\n";
inline constexpr const char* kBadType = "test fn test_inc_bool() {\n  assert inc(1) == true;\n}\n";
inline constexpr const char* kBadSyntax = "test fn test_broken() {\n  assert inc(1 == 2;\n}\n";

// A unit whose prompt at the default template and tokenizer needs more than
// 500 tokens at depths (2, 2) and (2, 1) and fits at (1, 1).
inline std::string shrink_fixture() {
  std::string beta_fields;
  for (int i = 0; i < 60; ++i) beta_fields += " measurement_channel_" + std::to_string(i) + ": int;";
  return "record Alpha { b: Beta; }\n"
         "record Beta {" + beta_fields + " }\n"
         "record AlphaSpecialisedVariantNumberOne extends Alpha { extra_one: int; }\n"
         "record AlphaSpecialisedVariantNumberOneRefinedFurtherForPolymorphismLevelTwoPurposes"
         "WithAnExtraordinarilyLongNameThatKeepsGoingAndGoingToFillTheBudget extends"
         " AlphaSpecialisedVariantNumberOne { extra_two: int; }\n"
         "fn probe(a: Alpha) -> int {\n"
         "  return 0;\n"
         "}\n";
}

// A unit whose prompt exceeds 500 tokens even at depths (0, 0).
inline std::string oversized_fixture() {
  std::string body;
  for (int i = 0; i < 60; ++i) {
    body += "  let value_number_" + std::to_string(i) + ": int = x + " + std::to_string(i) + ";\n";
  }
  return "fn huge(x: int) -> int {\n" + body + "  return x;\n}\n";
}

}  // namespace forgespark::testing

#endif  // FORGESPARK_TESTS_SUPPORT_LLM_FIXTURES_HPP_
