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

#include "forgespark/lang/parser.hpp"
#include "forgespark/lang/render.hpp"
#include "forgespark/lang/typecheck.hpp"
#include "program_fuzzer.hpp"

namespace forgespark::lang {
namespace {

TEST(Parser, MinimalFunction) {
  Program p = parse("fn inc(x: int) -> int { return x + 1; }");
  ASSERT_EQ(p.functions.size(), 1u);
  EXPECT_EQ(p.functions[0].name, "inc");
  ASSERT_EQ(p.functions[0].params.size(), 1u);
  EXPECT_EQ(p.functions[0].params[0].type, Type::Int());
  EXPECT_EQ(p.functions[0].return_type, Type::Int());
  ASSERT_EQ(p.functions[0].body.size(), 1u);
  EXPECT_EQ(p.functions[0].body[0].kind, Stmt::Kind::Return);
}

TEST(Parser, MalformedInputReportsLine) {
  try {
    parse("fn f( { }");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_GT(e.column(), 0);
  }
}

TEST(Parser, ErrorPositionOnLaterLine) {
  try {
    parse("fn f() -> int {\n  return 1;\n  let x int = 2;\n}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Parser, Precedence) {
  Expr e = parse_expression("1 + 2 * 3 < 4 && !b || c == d");
  ASSERT_EQ(e.kind, Expr::Kind::Binary);
  EXPECT_EQ(e.binary_op, BinaryOp::Or);
  const Expr& conj = e.operands[0];
  EXPECT_EQ(conj.binary_op, BinaryOp::And);
  const Expr& lt = conj.operands[0];
  EXPECT_EQ(lt.binary_op, BinaryOp::Lt);
  EXPECT_EQ(lt.operands[0].binary_op, BinaryOp::Add);
  EXPECT_EQ(lt.operands[0].operands[1].binary_op, BinaryOp::Mul);
  EXPECT_EQ(conj.operands[1].kind, Expr::Kind::Unary);
  EXPECT_EQ(e.operands[1].binary_op, BinaryOp::Eq);
}

TEST(Parser, LeftAssociativeSubtraction) {
  Expr e = parse_expression("a - b - c");
  EXPECT_EQ(e.operands[0].kind, Expr::Kind::Binary);
  EXPECT_EQ(e.operands[1].kind, Expr::Kind::Var);
}

TEST(Parser, NegativeLiteralFolds) {
  Expr e = parse_expression("-5");
  EXPECT_EQ(e.kind, Expr::Kind::IntLit);
  EXPECT_EQ(e.int_value, -5);
  Expr m = parse_expression("-9223372036854775808");
  EXPECT_EQ(m.kind, Expr::Kind::IntLit);
  EXPECT_EQ(m.int_value, std::numeric_limits<std::int64_t>::min());
}

TEST(Parser, IntegerOverflowRejected) {
  EXPECT_THROW(parse_expression("9223372036854775808"), ParseError);
}

TEST(Parser, RecordsAndLiterals) {
  Program p = parse(
      "record Animal { age: int; }\n"
      "record Cat extends Animal { lives: int; }\n"
      "fn f() -> Cat { return Cat { age: 1, lives: 9 }; }\n");
  ASSERT_EQ(p.records.size(), 2u);
  EXPECT_EQ(p.records[1].extends, std::optional<std::string>("Animal"));
  const Expr& lit = p.functions[0].body[0].exprs[0];
  EXPECT_EQ(lit.kind, Expr::Kind::RecordLit);
  EXPECT_EQ(lit.field_names, (std::vector<std::string>{"age", "lives"}));
}

TEST(Parser, StatementsAndTests) {
  Program p = parse(
      "fn f(a: int[]) -> int {\n"
      "  a[0] = 3;\n"
      "  while (a[0] > 0) {\n"
      "    a[0] = a[0] - 1;\n"
      "  }\n"
      "  return a[0];\n"
      "}\n"
      "test fn test_f() {\n"
      "  let r: int = f([1]);\n"
      "  assert r == 0;\n"
      "  expect_error f([]);\n"
      "}\n");
  EXPECT_EQ(p.functions[0].body[0].kind, Stmt::Kind::IndexAssign);
  EXPECT_EQ(p.functions[0].body[1].kind, Stmt::Kind::While);
  ASSERT_EQ(p.tests.size(), 1u);
  EXPECT_TRUE(p.tests[0].is_test);
  EXPECT_EQ(p.tests[0].body[2].kind, Stmt::Kind::ExpectError);
  EXPECT_EQ(p.functions[0].first_line, 1);
  EXPECT_EQ(p.functions[0].last_line, 7);
}

TEST(Parser, CommentsIgnored) {
  Program p = parse("// header\nfn f() -> int {\n  // inner\n  return 1; // trailing\n}\n");
  EXPECT_EQ(p.functions[0].body[0].line, 4);
}

TEST(Parser, TolerantSkipsBrokenItems) {
  TolerantParse t = parse_tolerant(
      "Here are tests:\n"
      "test fn test_a() {\n  assert f(1) == 2;\n}\n"
      "test fn test_b() {\n  assert f(1 == 2;\n}\n"
      "Hope this helps.\n");
  ASSERT_EQ(t.program.tests.size(), 1u);
  EXPECT_EQ(t.program.tests[0].name, "test_a");
  ASSERT_EQ(t.skipped.size(), 1u);
  EXPECT_EQ(t.skipped[0].line(), 6);
}

TEST(Render, CanonicalLayout) {
  std::string out = canonicalize("fn abs(x: int) -> int { if (x < 0) { return -x; } else { return x; } }");
  EXPECT_EQ(out,
            "fn abs(x: int) -> int {\n"
            "  if (x < 0) {\n"
            "    return -x;\n"
            "  } else {\n"
            "    return x;\n"
            "  }\n"
            "}\n");
}

TEST(Render, ParenthesizesOnlyWhenNeeded) {
  EXPECT_EQ(render(parse_expression("(a + b) * c")), "(a + b) * c");
  EXPECT_EQ(render(parse_expression("a + (b * c)")), "a + b * c");
  EXPECT_EQ(render(parse_expression("a - (b - c)")), "a - (b - c)");
  EXPECT_EQ(render(parse_expression("-(5)")), "-(5)");
  EXPECT_EQ(render(parse_expression("!(a && b)")), "!(a && b)");
}

TEST(Render, PreservesStatementCount) {
  const char* src =
      "fn f(x: int) -> int {\n  let y: int = x;\n  if (y > 2) {\n    y = 1;\n  }\n  return y;\n}\n";
  Program p = parse(src);
  EXPECT_EQ(count_statements(parse(render(p))), count_statements(p));
}

TEST(RenderProperty, RoundTripOnFuzzCorpus) {
  testing::ProgramFuzzer fuzz(7);
  for (int i = 0; i < 1000; ++i) {
    std::string src = fuzz.program();
    Program p = parse(src);
    ASSERT_TRUE(typecheck(p).ok()) << typecheck(p).error_text() << "\n" << src;
    std::string once = render(p);
    Program q = parse(once);
    ASSERT_TRUE(same_structure(p, q)) << src << "\n---\n" << once;
    ASSERT_EQ(count_statements(p), count_statements(q));
  }
}

TEST(RenderProperty, RenderParseRenderFixpoint) {
  testing::ProgramFuzzer fuzz(11);
  for (int i = 0; i < 100; ++i) {
    std::string once = render(parse(fuzz.program()));
    ASSERT_EQ(render(parse(once)), once);
  }
}

}  // namespace
}  // namespace forgespark::lang
