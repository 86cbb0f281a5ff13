#pragma once

// Reader for the fully parenthesized prefix syntax:
//
//   term    := VAR | CONSTNAME | (FUNNAME term+) | (eps VAR formula)
//   formula := (= term term) | (RELNAME term+) | (not formula)
//            | (or|and|imp|iff formula formula) | (ex|all VAR formula)

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epscan/syntax.hpp"

namespace epscan {

struct SourcePos {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  enum class Code { Lexical, Syntax, UndeclaredSymbol, ArityMismatch, WrongSort };

  ParseError(Code code, SourcePos pos, const std::string& what)
      : std::runtime_error(std::to_string(pos.line) + ":" +
                           std::to_string(pos.column) + ": " + what),
        code_(code),
        pos_(pos) {}

  Code code() const { return code_; }
  const SourcePos& pos() const { return pos_; }

 private:
  Code code_;
  SourcePos pos_;
};

namespace detail {

struct Token {
  enum class Type { LParen, RParen, Atom, End } type;
  std::string_view text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      SourcePos p = pos_;
      if (pos_.offset >= src_.size()) {
        out.push_back({Token::Type::End, {}, p});
        return out;
      }
      char c = src_[pos_.offset];
      if (c == '(' || c == ')') {
        advance();
        out.push_back({c == '(' ? Token::Type::LParen : Token::Type::RParen,
                       src_.substr(p.offset, 1), p});
        continue;
      }
      std::size_t start = pos_.offset;
      while (pos_.offset < src_.size()) {
        char d = src_[pos_.offset];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')')
          break;
        bool ok = (d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_' ||
                  d == '=';
        if (!ok)
          throw ParseError(ParseError::Code::Lexical, pos_,
                           std::string("unexpected character '") + d + "'");
        advance();
      }
      out.push_back({Token::Type::Atom, src_.substr(start, pos_.offset - start), p});
    }
  }

 private:
  void advance() {
    if (src_[pos_.offset] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++pos_.offset;
  }
  void skip_space() {
    while (pos_.offset < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_.offset])))
      advance();
  }

  std::string_view src_;
  SourcePos pos_;
};

class Parser {
 public:
  Parser(std::string_view src, const Signature& sig)
      : toks_(Lexer(src).run()), sig_(sig) {}

  Expr parse_any() {
    Expr e = expr();
    expect_end();
    return e;
  }

  Expr parse_sorted(bool want_term) {
    SourcePos p = peek().pos;
    Expr e = expr();
    if (e.is_term() != want_term)
      throw ParseError(ParseError::Code::WrongSort, p,
                       want_term ? "expected a term" : "expected a formula");
    expect_end();
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  void expect_end() {
    if (peek().type != Token::Type::End)
      throw ParseError(ParseError::Code::Syntax, peek().pos,
                       "trailing input after expression");
  }

  [[noreturn]] void fail(const Token& t, const std::string& what) {
    throw ParseError(ParseError::Code::Syntax, t.pos, what);
  }

  VarIndex variable(const Token& t) {
    if (t.type != Token::Type::Atom || !is_variable_token(t.text))
      fail(t, "expected a variable");
    std::string digits(t.text.substr(1));
    if (digits.size() > 9) fail(t, "variable index too large");
    return static_cast<VarIndex>(std::stoul(digits));
  }

  Expr term() {
    const Token& t = peek();
    Expr e = expr();
    if (!e.is_term())
      throw ParseError(ParseError::Code::WrongSort, t.pos, "expected a term");
    return e;
  }

  Expr formula() {
    const Token& t = peek();
    Expr e = expr();
    if (!e.is_formula())
      throw ParseError(ParseError::Code::WrongSort, t.pos, "expected a formula");
    return e;
  }

  void close() {
    const Token& t = next();
    if (t.type != Token::Type::RParen) fail(t, "expected ')'");
  }

  std::vector<Expr> terms_until_close() {
    std::vector<Expr> args;
    while (peek().type != Token::Type::RParen) {
      if (peek().type == Token::Type::End) fail(peek(), "unexpected end of input");
      args.push_back(term());
    }
    close();
    return args;
  }

  Expr expr() {
    const Token& t = next();
    switch (t.type) {
      case Token::Type::End:
        fail(t, "unexpected end of input");
      case Token::Type::RParen:
        fail(t, "unexpected ')'");
      case Token::Type::Atom: {
        if (is_variable_token(t.text)) return mk::var(variable(t));
        std::string name(t.text);
        if (sig_.constant_index(name)) return mk::constant(name);
        if (is_reserved_word(name) || name == "=")
          fail(t, "keyword '" + name + "' outside parentheses");
        throw ParseError(ParseError::Code::UndeclaredSymbol, t.pos,
                         "undeclared constant '" + name + "'");
      }
      case Token::Type::LParen:
        break;
    }
    const Token& head = next();
    if (head.type != Token::Type::Atom) fail(head, "expected an operator after '('");
    std::string_view h = head.text;
    if (h == "eps" || h == "ex" || h == "all") {
      VarIndex v = variable(next());
      Expr body = formula();
      close();
      if (h == "eps") return mk::eps(v, body);
      return h == "ex" ? mk::exists(v, body) : mk::forall(v, body);
    }
    if (h == "=") {
      Expr a = term();
      Expr b = term();
      close();
      return mk::equal(a, b);
    }
    if (h == "not") {
      Expr a = formula();
      close();
      return mk::not_(a);
    }
    if (h == "or" || h == "and" || h == "imp" || h == "iff") {
      Expr a = formula();
      Expr b = formula();
      close();
      if (h == "or") return mk::or_(a, b);
      if (h == "and") return mk::and_(a, b);
      return h == "imp" ? mk::imp(a, b) : mk::iff(a, b);
    }
    std::string name(h);
    if (auto fi = sig_.function_index(name)) {
      auto args = terms_until_close();
      std::size_t want = sig_.functions()[*fi].arity;
      if (args.size() != want)
        throw ParseError(ParseError::Code::ArityMismatch, head.pos,
                         "function '" + name + "' expects " + std::to_string(want) +
                             " argument(s), got " + std::to_string(args.size()));
      return mk::app(name, std::move(args));
    }
    if (auto ri = sig_.relation_index(name)) {
      auto args = terms_until_close();
      std::size_t want = sig_.relations()[*ri].arity;
      if (args.size() != want)
        throw ParseError(ParseError::Code::ArityMismatch, head.pos,
                         "relation '" + name + "' expects " + std::to_string(want) +
                             " argument(s), got " + std::to_string(args.size()));
      return mk::rel(name, std::move(args));
    }
    if (sig_.constant_index(name))
      fail(head, "constant '" + name + "' cannot be applied");
    throw ParseError(ParseError::Code::UndeclaredSymbol, head.pos,
                     "undeclared symbol '" + name + "'");
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const Signature& sig_;
};

}  // namespace detail

/// Parse a term or a formula.
inline Expr parse(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_any();
}

inline Expr parse_term(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_sorted(true);
}

inline Expr parse_formula(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_sorted(false);
}

}  // namespace epscan
