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

#include <gtest/gtest.h>

#include <random>

#include "forgespark/lang/parser.hpp"
#include "forgespark/lang/typecheck.hpp"

namespace forgespark::lang {
namespace {

std::vector<std::string> errors_of(std::string_view src) {
  std::vector<std::string> out;
  for (const auto& e : typecheck(parse(src)).errors) out.push_back(e.to_string());
  return out;
}

TEST(Typecheck, ReturnTypeMismatch) {
  EXPECT_EQ(errors_of("fn f(x: int) -> bool { return x; }"),
            (std::vector<std::string>{"line 1: expected bool, found int"}));
}

TEST(Typecheck, SubtypeArgumentAccepted) {
  auto r = typecheck(parse(
      "record Animal { age: int; }\n"
      "record Cat extends Animal { lives: int; }\n"
      "fn feed(a: Animal) -> int { return a.age; }\n"
      "fn g() -> int { return feed(Cat { age: 2, lives: 9 }); }\n"));
  EXPECT_TRUE(r.ok()) << r.error_text();
}

TEST(Typecheck, SupertypeArgumentRejected) {
  auto errs = errors_of(
      "record Animal { age: int; }\n"
      "record Cat extends Animal { lives: int; }\n"
      "fn pet(c: Cat) -> int { return c.lives; }\n"
      "fn g() -> int { return pet(Animal { age: 2 }); }\n");
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0], "line 4: argument 1 of 'pet': expected Cat, found Animal");
}

TEST(Typecheck, SelfExtendingRecord) {
  auto errs = errors_of("record A extends A { x: int; }");
  ASSERT_FALSE(errs.empty());
  EXPECT_NE(errs[0].find("inheritance cycle"), std::string::npos);
}

TEST(Typecheck, CollectsAllErrors) {
  auto errs = errors_of(
      "fn f(x: int) -> int {\n"
      "  let b: bool = x;\n"
      "  return incr(x);\n"
      "}\n");
  EXPECT_EQ(errs, (std::vector<std::string>{"line 2: expected bool, found int",
                                            "line 3: unknown function 'incr'"}));
}

TEST(Typecheck, MissingReturnPath) {
  auto errs = errors_of("fn f(x: int) -> int {\n  if (x > 0) {\n    return 1;\n  }\n}\n");
  EXPECT_EQ(errs, (std::vector<std::string>{"line 5: function 'f' does not return a value on every path"}));
}

TEST(Typecheck, IfElseBothReturnIsEnough) {
  auto r = typecheck(parse(
      "fn f(x: int) -> int {\n  if (x > 0) {\n    return 1;\n  } else {\n    return 2;\n  }\n}\n"));
  EXPECT_TRUE(r.ok()) << r.error_text();
}

TEST(Typecheck, TestMustCallProjectFunction) {
  auto errs = errors_of("fn f() -> int { return 1; }\ntest fn test_nothing() {\n  assert true;\n}\n");
  EXPECT_EQ(errs, (std::vector<std::string>{"line 2: test 'test_nothing' does not call any project function"}));
}

TEST(Typecheck, FieldShadowingRejected) {
  auto errs = errors_of("record A { x: int; }\nrecord B extends A { x: int; }\n");
  EXPECT_EQ(errs, (std::vector<std::string>{"line 2: field 'x' in record 'B' shadows an inherited field"}));
}

TEST(Typecheck, ExpectErrorNeedsCall) {
  auto errs = errors_of("fn f() -> int { return 1; }\ntest fn test_a() {\n  f();\n  expect_error 1 / 0;\n}\n");
  EXPECT_EQ(errs, (std::vector<std::string>{"line 4: expect_error requires a call expression"}));
}

TEST(Typecheck, LenBuiltin) {
  EXPECT_TRUE(typecheck(parse("fn f(a: int[]) -> int { return len(a); }")).ok());
  auto errs = errors_of("fn len(a: int[]) -> int { return 0; }");
  EXPECT_EQ(errs, (std::vector<std::string>{"line 1: name 'len' is reserved"}));
}

TEST(Typecheck, AnnotatesExpressions) {
  auto r = typecheck(parse("fn f(a: int[]) -> bool { return a[0] < 3; }"));
  ASSERT_TRUE(r.ok());
  const Expr& cmp = r.typed->program().functions[0].body[0].exprs[0];
  EXPECT_EQ(cmp.type, Type::Bool());
  EXPECT_EQ(cmp.operands[0].type, Type::Int());
  EXPECT_EQ(cmp.operands[0].operands[0].type, Type::IntArray());
}

TEST(Typecheck, DeterministicMessages) {
  const char* src = "fn f(x: int) -> int {\n  let y: T = x;\n  return z;\n}\n";
  EXPECT_EQ(errors_of(src), errors_of(src));
}

// Subtyping is reflexive and transitive along extends-chains, and every cyclic
// configuration is rejected.
TEST(TypecheckProperty, SubtypeRelationAndCycles) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 300; ++round) {
    int n = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::string src;
    for (int i = 0; i < n; ++i) {
      if (std::bernoulli_distribution(0.7)(rng)) {
        parent[static_cast<std::size_t>(i)] = std::uniform_int_distribution<int>(0, n - 1)(rng);
      }
      src += "record T" + std::to_string(i);
      if (parent[static_cast<std::size_t>(i)] >= 0) src += " extends T" + std::to_string(parent[static_cast<std::size_t>(i)]);
      src += " { f" + std::to_string(i) + ": int; }\n";
    }
    // Oracle: follow parent pointers, a revisit means a cycle.
    bool cyclic = false;
    for (int i = 0; i < n && !cyclic; ++i) {
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      for (int k = i; k >= 0; k = parent[static_cast<std::size_t>(k)]) {
        if (seen[static_cast<std::size_t>(k)]) {
          cyclic = true;
          break;
        }
        seen[static_cast<std::size_t>(k)] = true;
      }
    }
    auto r = typecheck(parse(src));
    ASSERT_EQ(r.ok(), !cyclic) << src << r.error_text();
    if (cyclic) {
      ASSERT_NE(r.error_text().find("inheritance cycle"), std::string::npos);
      continue;
    }
    auto ancestor = [&](int sub, int super) {
      for (int k = sub; k >= 0; k = parent[static_cast<std::size_t>(k)]) {
        if (k == super) return true;
      }
      return false;
    };
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        std::string sa = "T" + std::to_string(a), sb = "T" + std::to_string(b);
        ASSERT_EQ(r.typed->is_subtype(sa, sb), ancestor(a, b));
        if (a == b) ASSERT_TRUE(r.typed->is_subtype(sa, sb));
        for (int c = 0; c < n; ++c) {
          std::string sc = "T" + std::to_string(c);
          if (r.typed->is_subtype(sa, sb) && r.typed->is_subtype(sb, sc)) {
            ASSERT_TRUE(r.typed->is_subtype(sa, sc));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace forgespark::lang
