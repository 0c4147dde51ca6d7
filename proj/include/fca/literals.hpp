#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "fca/graded_op.hpp"

namespace fca {

// Parser for textual operator literals such as
//   "0.5*I@I + 0.5*Z@Z"   or   "0.70710678*X@Y - 1i*Z@I"
// One token I,X,Y,Z per cell, '@' separates cell positions, complex scalars
// written as a, bi or a+bi. All cells are single-mode.
class LiteralParser {
 public:
  explicit LiteralParser(const std::string& text) : s_(text) {}

  // Returns the operator and its cell count (deduced from the first product).
  GradedOperator parse(int expect_cells = -1) {
    skip_ws();
    GradedOperator acc;
    int cells = expect_cells;
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (!first) {
        char c = peek();
        if (c == '+') {
          next();
        } else if (c == '-') {
          sign = -1.0;
          next();
        } else {
          throw error("expected '+' or '-'");
        }
        skip_ws();
      } else if (peek() == '-') {
        sign = -1.0;
        next();
        skip_ws();
      }
      auto [coeff, word] = parse_term();
      if (cells < 0) cells = int(word.size());
      if (int(word.size()) != cells) throw error("inconsistent cell count across terms");
      CellLayout lay{cells, 1};
      GradedOperator t = GradedOperator::identity(lay.width());
      for (int c = 0; c < cells; c++) t = op_mul(t, token_op(word[size_t(c)], lay, c));
      t *= sign * coeff;
      if (first) {
        acc = t;
        first = false;
      } else {
        acc += t;
      }
      skip_ws();
    }
    if (first) throw error("empty operator literal");
    return acc;
  }

  static GradedOperator parse_text(const std::string& text, int expect_cells = -1) {
    return LiteralParser(text).parse(expect_cells);
  }

 private:
  std::string s_;
  size_t pos_ = 0;

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char next() { return s_[pos_++]; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(uint8_t(s_[pos_]))) pos_++;
  }
  std::invalid_argument error(const std::string& msg) const {
    return std::invalid_argument("operator literal, position " + std::to_string(pos_) + ": " + msg);
  }

  bool at_pauli() const {
    char c = peek();
    return c == 'I' || c == 'X' || c == 'Y' || c == 'Z';
  }

  // [scalar '*']? TOK ('@' TOK)*
  std::pair<cplx, std::string> parse_term() {
    cplx coeff = 1.0;
    skip_ws();
    if (!at_pauli()) {
      coeff = parse_scalar();
      skip_ws();
      if (peek() == '*') {
        next();
        skip_ws();
      }
    }
    std::string word;
    if (!at_pauli()) throw error("expected cell token I, X, Y or Z");
    word.push_back(next());
    skip_ws();
    while (peek() == '@') {
      next();
      skip_ws();
      if (!at_pauli()) throw error("expected cell token after '@'");
      word.push_back(next());
      skip_ws();
    }
    return {coeff, word};
  }

  // a | bi | a+bi | a-bi | i | -i  (also accepts 'j' for the imaginary unit)
  cplx parse_scalar() {
    double re = 0, im = 0;
    bool have = false;
    double v = parse_signed_number();
    if (peek() == 'i' || peek() == 'j') {
      next();
      im = v;
      have = true;
    } else {
      re = v;
      have = true;
      size_t save = pos_;
      skip_ws();
      char c = peek();
      if (c == '+' || c == '-') {
        size_t mark = pos_;
        double w = parse_signed_number();
        if (peek() == 'i' || peek() == 'j') {
          next();
          im = w;
        } else {
          pos_ = mark;  // the sign belongs to the next term
        }
      } else {
        pos_ = save;
      }
    }
    if (!have) throw error("expected scalar");
    return {re, im};
  }

  double parse_signed_number() {
    skip_ws();
    size_t start = pos_;
    if (peek() == '+' || peek() == '-') next();
    if (peek() == 'i' || peek() == 'j') {
      // bare "i" / "-i"
      return s_[start] == '-' ? -1.0 : 1.0;
    }
    bool any = false;
    while (std::isdigit(uint8_t(peek())) || peek() == '.') {
      next();
      any = true;
    }
    if ((peek() == 'e' || peek() == 'E') && any) {
      next();
      if (peek() == '+' || peek() == '-') next();
      while (std::isdigit(uint8_t(peek()))) next();
    }
    if (!any) throw error("expected number");
    return std::stod(s_.substr(start, pos_ - start));
  }

  GradedOperator token_op(char tok, const CellLayout& lay, int cell) {
    switch (tok) {
      case 'I':
        return GradedOperator::identity(lay.width());
      case 'X':
        return majorana_x(lay, cell);
      case 'Y':
        return majorana_y(lay, cell);
      case 'Z':
        return majorana_z(lay, cell);
    }
    throw error("unknown token");
  }
};

inline GradedOperator parse_operator_literal(const std::string& text, int expect_cells = -1) {
  return LiteralParser::parse_text(text, expect_cells);
}

}  // namespace fca
