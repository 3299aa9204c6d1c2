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

#include "forgespark/lang/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

namespace forgespark::lang {

ParseError::ParseError(int line, int column, std::string message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(std::move(message)) {}

namespace {

enum class Tok {
  End,
  Int,
  Ident,
  // keywords
  KwRecord,
  KwExtends,
  KwFn,
  KwTest,
  KwInt,
  KwBool,
  KwLet,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwAssert,
  KwExpectError,
  KwTrue,
  KwFalse,
  // punctuation
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Colon,
  Arrow,
  Dot,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  NotEq,
  AndAnd,
  OrOr,
  Bang,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t number = 0;
  bool number_overflow = false;
  int line = 1;
  int column = 1;
};

Tok keyword(std::string_view word) {
  static const std::pair<std::string_view, Tok> kKeywords[] = {
      {"record", Tok::KwRecord}, {"extends", Tok::KwExtends},
      {"fn", Tok::KwFn},         {"test", Tok::KwTest},
      {"int", Tok::KwInt},       {"bool", Tok::KwBool},
      {"let", Tok::KwLet},       {"if", Tok::KwIf},
      {"else", Tok::KwElse},     {"while", Tok::KwWhile},
      {"return", Tok::KwReturn}, {"assert", Tok::KwAssert},
      {"expect_error", Tok::KwExpectError},
      {"true", Tok::KwTrue},     {"false", Tok::KwFalse},
  };
  for (const auto& [text, tok] : kKeywords) {
    if (text == word) return tok;
  }
  return Tok::Ident;
}

std::vector<Token> tokenize(std::string_view src, int first_line = 1) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::uint64_t value = 0;
      bool overflow = false;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        std::uint64_t digit = static_cast<std::uint64_t>(src[j] - '0');
        if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) overflow = true;
        value = value * 10 + digit;
        ++j;
      }
      if (j < src.size() &&
          (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        throw ParseError(line, col, "malformed number");
      }
      tok.kind = Tok::Int;
      tok.text = std::string(src.substr(i, j - i));
      tok.number = value;
      tok.number_overflow = overflow;
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = keyword(tok.text);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    auto two = [&](char next) { return i + 1 < src.size() && src[i + 1] == next; };
    std::size_t len = 1;
    switch (c) {
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      case '{': tok.kind = Tok::LBrace; break;
      case '}': tok.kind = Tok::RBrace; break;
      case '[': tok.kind = Tok::LBracket; break;
      case ']': tok.kind = Tok::RBracket; break;
      case ',': tok.kind = Tok::Comma; break;
      case ';': tok.kind = Tok::Semi; break;
      case ':': tok.kind = Tok::Colon; break;
      case '.': tok.kind = Tok::Dot; break;
      case '+': tok.kind = Tok::Plus; break;
      case '*': tok.kind = Tok::Star; break;
      case '/': tok.kind = Tok::Slash; break;
      case '%': tok.kind = Tok::Percent; break;
      case '-':
        if (two('>')) {
          tok.kind = Tok::Arrow;
          len = 2;
        } else {
          tok.kind = Tok::Minus;
        }
        break;
      case '=':
        if (two('=')) {
          tok.kind = Tok::EqEq;
          len = 2;
        } else {
          tok.kind = Tok::Assign;
        }
        break;
      case '!':
        if (two('=')) {
          tok.kind = Tok::NotEq;
          len = 2;
        } else {
          tok.kind = Tok::Bang;
        }
        break;
      case '<':
        if (two('=')) {
          tok.kind = Tok::Le;
          len = 2;
        } else {
          tok.kind = Tok::Lt;
        }
        break;
      case '>':
        if (two('=')) {
          tok.kind = Tok::Ge;
          len = 2;
        } else {
          tok.kind = Tok::Gt;
        }
        break;
      case '&':
        if (!two('&')) throw ParseError(line, col, "unexpected character '&'");
        tok.kind = Tok::AndAnd;
        len = 2;
        break;
      case '|':
        if (!two('|')) throw ParseError(line, col, "unexpected character '|'");
        tok.kind = Tok::OrOr;
        len = 2;
        break;
      default: {
        std::string shown = (static_cast<unsigned char>(c) < 0x80)
                                ? std::string(1, c)
                                : std::string("non-ASCII byte");
        throw ParseError(line, col, "unexpected character '" + shown + "'");
      }
    }
    tok.text = std::string(src.substr(i, len));
    advance(len);
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

std::string describe(const Token& tok) {
  if (tok.kind == Tok::End) return "end of input";
  return "'" + tok.text + "'";
}

// Binding power of binary operators; higher binds tighter.
int precedence(Tok t) {
  switch (t) {
    case Tok::OrOr: return 1;
    case Tok::AndAnd: return 2;
    case Tok::EqEq:
    case Tok::NotEq: return 3;
    case Tok::Lt:
    case Tok::Le:
    case Tok::Gt:
    case Tok::Ge: return 4;
    case Tok::Plus:
    case Tok::Minus: return 5;
    case Tok::Star:
    case Tok::Slash:
    case Tok::Percent: return 6;
    default: return 0;
  }
}

BinaryOp to_binary(Tok t) {
  switch (t) {
    case Tok::OrOr: return BinaryOp::Or;
    case Tok::AndAnd: return BinaryOp::And;
    case Tok::EqEq: return BinaryOp::Eq;
    case Tok::NotEq: return BinaryOp::Ne;
    case Tok::Lt: return BinaryOp::Lt;
    case Tok::Le: return BinaryOp::Le;
    case Tok::Gt: return BinaryOp::Gt;
    case Tok::Ge: return BinaryOp::Ge;
    case Tok::Plus: return BinaryOp::Add;
    case Tok::Minus: return BinaryOp::Sub;
    case Tok::Star: return BinaryOp::Mul;
    case Tok::Slash: return BinaryOp::Div;
    default: return BinaryOp::Mod;
  }
}

constexpr std::uint64_t kMaxPositive =
    static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());

class Parser {
 public:
  Parser(std::vector<Token> tokens, int file) : toks_(std::move(tokens)), file_(file) {}

  Program parse_program() {
    Program program;
    while (!at(Tok::End)) parse_item(program);
    return program;
  }

  void parse_item(Program& program) {
    switch (peek().kind) {
      case Tok::KwRecord:
        program.records.push_back(parse_record());
        break;
      case Tok::KwFn:
        program.functions.push_back(parse_function(false));
        break;
      case Tok::KwTest:
        program.tests.push_back(parse_function(true));
        break;
      default:
        fail("expected 'record', 'fn' or 'test', found " + describe(peek()));
    }
  }

  Expr parse_lone_expression() {
    Expr e = parse_expr();
    if (!at(Tok::End)) fail("unexpected " + describe(peek()) + " after expression");
    return e;
  }

  bool at(Tok t) const { return peek().kind == t; }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[idx];
  }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(peek().line, peek().column, message);
  }

  Token expect(Tok t, const char* what) {
    if (!at(t)) fail(std::string("expected ") + what + ", found " + describe(peek()));
    return take();
  }

  bool accept(Tok t) {
    if (!at(t)) return false;
    take();
    return true;
  }

  Type parse_type() {
    if (accept(Tok::KwBool)) return Type::Bool();
    if (accept(Tok::KwInt)) {
      if (accept(Tok::LBracket)) {
        expect(Tok::RBracket, "']'");
        return Type::IntArray();
      }
      return Type::Int();
    }
    if (at(Tok::Ident)) return Type::Record(take().text);
    fail("expected a type, found " + describe(peek()));
  }

  RecordDecl parse_record() {
    RecordDecl rec;
    rec.line = expect(Tok::KwRecord, "'record'").line;
    rec.file = file_;
    rec.name = expect(Tok::Ident, "record name").text;
    if (accept(Tok::KwExtends)) rec.extends = expect(Tok::Ident, "parent record name").text;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      FieldDecl field;
      field.name = expect(Tok::Ident, "field name").text;
      expect(Tok::Colon, "':'");
      field.type = parse_type();
      expect(Tok::Semi, "';'");
      rec.fields.push_back(std::move(field));
    }
    expect(Tok::RBrace, "'}'");
    return rec;
  }

  FunctionDecl parse_function(bool is_test) {
    FunctionDecl fn;
    fn.is_test = is_test;
    fn.file = file_;
    if (is_test) {
      fn.first_line = expect(Tok::KwTest, "'test'").line;
      expect(Tok::KwFn, "'fn'");
    } else {
      fn.first_line = expect(Tok::KwFn, "'fn'").line;
    }
    fn.name = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    if (is_test) {
      if (!at(Tok::RParen)) fail("test functions take no parameters");
    } else if (!at(Tok::RParen)) {
      do {
        Param p;
        p.name = expect(Tok::Ident, "parameter name").text;
        expect(Tok::Colon, "':'");
        p.type = parse_type();
        fn.params.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    if (is_test) {
      fn.return_type = Type::Unit();
    } else {
      expect(Tok::Arrow, "'->'");
      fn.return_type = parse_type();
    }
    fn.body = parse_block(&fn.last_line);
    return fn;
  }

  Block parse_block(int* closing_line = nullptr) {
    expect(Tok::LBrace, "'{'");
    Block block;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("expected '}', found end of input");
      block.push_back(parse_stmt());
    }
    Token close = take();
    if (closing_line != nullptr) *closing_line = close.line;
    return block;
  }

  Stmt parse_stmt() {
    Stmt s;
    s.line = peek().line;
    switch (peek().kind) {
      case Tok::KwLet:
        take();
        s.kind = Stmt::Kind::Let;
        s.name = expect(Tok::Ident, "variable name").text;
        expect(Tok::Colon, "':'");
        s.declared = parse_type();
        expect(Tok::Assign, "'='");
        s.exprs.push_back(parse_expr());
        expect(Tok::Semi, "';'");
        return s;
      case Tok::KwIf:
        take();
        s.kind = Stmt::Kind::If;
        expect(Tok::LParen, "'('");
        s.exprs.push_back(parse_expr());
        expect(Tok::RParen, "')'");
        s.body = parse_block();
        if (accept(Tok::KwElse)) {
          s.has_else = true;
          s.else_body = parse_block();
        }
        return s;
      case Tok::KwWhile:
        take();
        s.kind = Stmt::Kind::While;
        expect(Tok::LParen, "'('");
        s.exprs.push_back(parse_expr());
        expect(Tok::RParen, "')'");
        s.body = parse_block();
        return s;
      case Tok::KwReturn:
        take();
        s.kind = Stmt::Kind::Return;
        if (!at(Tok::Semi)) s.exprs.push_back(parse_expr());
        expect(Tok::Semi, "';'");
        return s;
      case Tok::KwAssert:
        take();
        s.kind = Stmt::Kind::Assert;
        s.exprs.push_back(parse_expr());
        expect(Tok::Semi, "';'");
        return s;
      case Tok::KwExpectError:
        take();
        s.kind = Stmt::Kind::ExpectError;
        s.exprs.push_back(parse_expr());
        expect(Tok::Semi, "';'");
        return s;
      default:
        break;
    }
    Expr target = parse_expr();
    if (at(Tok::Assign)) {
      Token eq = take();
      if (target.kind == Expr::Kind::Var) {
        s.kind = Stmt::Kind::Assign;
        s.name = target.name;
      } else if (target.kind == Expr::Kind::Index &&
                 target.operands[0].kind == Expr::Kind::Var) {
        s.kind = Stmt::Kind::IndexAssign;
        s.name = target.operands[0].name;
        s.exprs.push_back(std::move(target.operands[1]));
      } else {
        throw ParseError(eq.line, eq.column, "invalid assignment target");
      }
      s.exprs.push_back(parse_expr());
      expect(Tok::Semi, "';'");
      return s;
    }
    s.kind = Stmt::Kind::ExprStmt;
    s.exprs.push_back(std::move(target));
    expect(Tok::Semi, "';'");
    return s;
  }

  Expr parse_expr(int min_prec = 1) {
    Expr lhs = parse_unary();
    while (true) {
      int prec = precedence(peek().kind);
      if (prec == 0 || prec < min_prec) break;
      Token op = take();
      Expr rhs = parse_expr(prec + 1);
      Expr bin;
      bin.kind = Expr::Kind::Binary;
      bin.binary_op = to_binary(op.kind);
      bin.line = op.line;
      bin.column = op.column;
      bin.operands.push_back(std::move(lhs));
      bin.operands.push_back(std::move(rhs));
      lhs = std::move(bin);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at(Tok::Minus) || at(Tok::Bang)) {
      Token op = take();
      // `-<literal>` is a negative literal unless a postfix operator follows.
      if (op.kind == Tok::Minus && at(Tok::Int) && peek(1).kind != Tok::LBracket &&
          peek(1).kind != Tok::Dot) {
        Token num = take();
        if (num.number_overflow || num.number > kMaxPositive + 1) {
          throw ParseError(num.line, num.column, "integer literal out of range");
        }
        Expr lit;
        lit.kind = Expr::Kind::IntLit;
        lit.line = op.line;
        lit.column = op.column;
        lit.int_value = num.number == kMaxPositive + 1
                            ? std::numeric_limits<std::int64_t>::min()
                            : -static_cast<std::int64_t>(num.number);
        return lit;
      }
      Expr u;
      u.kind = Expr::Kind::Unary;
      u.unary_op = op.kind == Tok::Minus ? UnaryOp::Neg : UnaryOp::Not;
      u.line = op.line;
      u.column = op.column;
      u.operands.push_back(parse_unary());
      return u;
    }
    return parse_postfix(parse_primary());
  }

  Expr parse_postfix(Expr base) {
    while (true) {
      if (at(Tok::Dot)) {
        Token dot = take();
        Expr f;
        f.kind = Expr::Kind::Field;
        f.line = dot.line;
        f.column = dot.column;
        f.name = expect(Tok::Ident, "field name").text;
        f.operands.push_back(std::move(base));
        base = std::move(f);
      } else if (at(Tok::LBracket)) {
        Token br = take();
        Expr idx;
        idx.kind = Expr::Kind::Index;
        idx.line = br.line;
        idx.column = br.column;
        idx.operands.push_back(std::move(base));
        idx.operands.push_back(parse_expr());
        expect(Tok::RBracket, "']'");
        base = std::move(idx);
      } else {
        return base;
      }
    }
  }

  Expr parse_primary() {
    const Token& t = peek();
    Expr e;
    e.line = t.line;
    e.column = t.column;
    switch (t.kind) {
      case Tok::Int: {
        Token num = take();
        if (num.number_overflow || num.number > kMaxPositive) {
          throw ParseError(num.line, num.column, "integer literal out of range");
        }
        e.kind = Expr::Kind::IntLit;
        e.int_value = static_cast<std::int64_t>(num.number);
        return e;
      }
      case Tok::KwTrue:
      case Tok::KwFalse:
        e.kind = Expr::Kind::BoolLit;
        e.bool_value = take().kind == Tok::KwTrue;
        return e;
      case Tok::LParen: {
        take();
        Expr inner = parse_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LBracket:
        take();
        e.kind = Expr::Kind::ArrayLit;
        if (!at(Tok::RBracket)) {
          do {
            e.operands.push_back(parse_expr());
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBracket, "']'");
        return e;
      case Tok::Ident: {
        e.name = take().text;
        if (at(Tok::LParen)) {
          take();
          e.kind = Expr::Kind::Call;
          if (!at(Tok::RParen)) {
            do {
              e.operands.push_back(parse_expr());
            } while (accept(Tok::Comma));
          }
          expect(Tok::RParen, "')'");
          return e;
        }
        bool record_literal =
            at(Tok::LBrace) && (peek(1).kind == Tok::RBrace ||
                                (peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon));
        if (record_literal) {
          take();
          e.kind = Expr::Kind::RecordLit;
          if (!at(Tok::RBrace)) {
            do {
              e.field_names.push_back(expect(Tok::Ident, "field name").text);
              expect(Tok::Colon, "':'");
              e.operands.push_back(parse_expr());
            } while (accept(Tok::Comma));
          }
          expect(Tok::RBrace, "'}'");
          return e;
        }
        e.kind = Expr::Kind::Var;
        return e;
      }
      default:
        fail("expected an expression, found " + describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int file_;
};

}  // namespace

Program parse(std::string_view source, std::string source_name, int file) {
  Parser parser(tokenize(source), file);
  Program program = parser.parse_program();
  if (program.sources.size() <= static_cast<std::size_t>(file)) {
    program.sources.resize(static_cast<std::size_t>(file) + 1);
  }
  program.sources[static_cast<std::size_t>(file)] = std::move(source_name);
  return program;
}

Expr parse_expression(std::string_view source) {
  Parser parser(tokenize(source), 0);
  return parser.parse_lone_expression();
}

TolerantParse parse_tolerant(std::string_view source) {
  TolerantParse result;
  result.program.sources.push_back("<response>");

  // Item boundaries: a `record`, `fn` or `test` keyword at the start of a
  // line. Scanning lines keeps this independent of whether the text lexes.
  std::vector<std::pair<std::size_t, int>> starts;  // (offset, line)
  std::size_t offset = 0;
  int line = 1;
  while (offset <= source.size()) {
    std::size_t eol = source.find('\n', offset);
    if (eol == std::string_view::npos) eol = source.size();
    std::string_view text = source.substr(offset, eol - offset);
    std::size_t first = text.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      std::string_view rest = text.substr(first);
      auto starts_with_word = [&](std::string_view w) {
        return rest.substr(0, w.size()) == w &&
               (rest.size() == w.size() || rest[w.size()] == ' ' || rest[w.size()] == '\t');
      };
      if (starts_with_word("record") || starts_with_word("fn") || starts_with_word("test")) {
        starts.emplace_back(offset, line);
      }
    }
    if (eol == source.size()) break;
    offset = eol + 1;
    ++line;
  }

  for (std::size_t k = 0; k < starts.size(); ++k) {
    std::size_t begin = starts[k].first;
    std::size_t end = k + 1 < starts.size() ? starts[k + 1].first : source.size();
    // Trim trailing prose: stop at the brace closing the item's body.
    int depth = 0;
    bool opened = false;
    for (std::size_t i = begin; i < end; ++i) {
      if (source[i] == '/' && i + 1 < end && source[i + 1] == '/') {
        while (i < end && source[i] != '\n') ++i;
        continue;
      }
      if (source[i] == '{') {
        ++depth;
        opened = true;
      } else if (source[i] == '}' && --depth == 0 && opened) {
        end = i + 1;
        break;
      }
    }
    std::string_view chunk = source.substr(begin, end - begin);
    try {
      Parser parser(tokenize(chunk, starts[k].second), 0);
      Program piece = parser.parse_program();
      for (auto& r : piece.records) result.program.records.push_back(std::move(r));
      for (auto& f : piece.functions) result.program.functions.push_back(std::move(f));
      for (auto& t : piece.tests) result.program.tests.push_back(std::move(t));
    } catch (const ParseError& err) {
      result.skipped.push_back(err);
    }
  }
  return result;
}

}  // namespace forgespark::lang
