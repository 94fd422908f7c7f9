#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <vector>

#include "twistbench/errors.hpp"

namespace tb {

// Recursive-descent parser shared by scalar literals, tower polynomials and
// noncommutative relation expressions.
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('+' | '-') unary | power
//   power := atom ('^' INT)?
//   atom  := INT | IDENT | '(' expr ')' | '[' expr ',' expr ']' ['+']
//
// A '+' written directly after ']' (no space) selects the anticommutator.
//
// The builder supplies the value type V and the operations on it.
template <class Builder>
class ExprParser {
 public:
  using V = typename Builder::Value;

  ExprParser(const std::string& text, Builder& b) : b_(b) { tokenize(text); }

  V parse() {
    V v = expr();
    if (pos_ != toks_.size()) fail_parse("unexpected token '" + toks_[pos_].text + "'");
    return v;
  }

 private:
  enum class T { Int, Ident, Op, AntiClose };
  struct Tok {
    T type;
    std::string text;
  };

  void tokenize(const std::string& s) {
    size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        toks_.push_back({T::Int, s.substr(i, j - i)});
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
          ++j;
        toks_.push_back({T::Ident, s.substr(i, j - i)});
        i = j;
      } else if (c == ']' && i + 1 < s.size() && s[i + 1] == '+') {
        toks_.push_back({T::AntiClose, "]+"});
        i += 2;
      } else if (std::string("+-*/^()[],").find(c) != std::string::npos) {
        toks_.push_back({T::Op, std::string(1, c)});
        ++i;
      } else {
        fail_parse(std::string("unexpected character '") + c + "'");
      }
    }
  }

  bool peek_op(const char* op) const {
    return pos_ < toks_.size() && toks_[pos_].type == T::Op && toks_[pos_].text == op;
  }

  void expect_op(const char* op) {
    if (!peek_op(op)) fail_parse(std::string("expected '") + op + "'");
    ++pos_;
  }

  V expr() {
    V v = term();
    while (peek_op("+") || peek_op("-")) {
      bool plus = toks_[pos_++].text == "+";
      V r = term();
      v = plus ? b_.add(v, r) : b_.sub(v, r);
    }
    return v;
  }

  V term() {
    V v = unary();
    while (peek_op("*") || peek_op("/")) {
      bool times = toks_[pos_++].text == "*";
      V r = unary();
      v = times ? b_.mul(v, r) : b_.div(v, r);
    }
    return v;
  }

  V unary() {
    if (peek_op("-")) {
      ++pos_;
      return b_.neg(unary());
    }
    if (peek_op("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  V power() {
    V v = atom();
    if (peek_op("^")) {
      ++pos_;
      if (pos_ >= toks_.size() || toks_[pos_].type != T::Int)
        fail_parse("exponent must be a non-negative integer literal");
      long e = std::stol(toks_[pos_++].text);
      v = b_.pow(v, e);
    }
    return v;
  }

  V atom() {
    if (pos_ >= toks_.size()) fail_parse("unexpected end of expression");
    const Tok& t = toks_[pos_];
    if (t.type == T::Int) {
      ++pos_;
      return b_.constant(mpq_class(mpz_class(t.text)));
    }
    if (t.type == T::Ident) {
      ++pos_;
      return b_.symbol(t.text);
    }
    if (peek_op("(")) {
      ++pos_;
      V v = expr();
      expect_op(")");
      return v;
    }
    if (peek_op("[")) {
      ++pos_;
      V a = expr();
      expect_op(",");
      V c = expr();
      if (pos_ < toks_.size() && toks_[pos_].type == T::AntiClose) {
        ++pos_;
        return b_.bracket(a, c, true);
      }
      expect_op("]");
      return b_.bracket(a, c, false);
    }
    fail_parse("unexpected token '" + t.text + "'");
  }

  Builder& b_;
  std::vector<Tok> toks_;
  size_t pos_ = 0;
};

}  // namespace tb
