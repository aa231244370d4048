#include "core/poly.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace bbres {

namespace {

struct Token {
  enum Kind { kIdent, kNumber, kPlus, kMinus, kStar, kCaret, kLParen, kRParen, kEnd };
  Kind kind = kEnd;
  std::string text;
  double value = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::kEnd;
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_.kind = Token::kPlus; ++pos_; return;
      case '-': tok_.kind = Token::kMinus; ++pos_; return;
      case '*': tok_.kind = Token::kStar; ++pos_; return;
      case '^': tok_.kind = Token::kCaret; ++pos_; return;
      case '(': tok_.kind = Token::kLParen; ++pos_; return;
      case ')': tok_.kind = Token::kRParen; ++pos_; return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::kIdent;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  void lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    bool is_decimal = false;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      is_decimal = true;
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        is_decimal = true;
        digits();
      } else {
        pos_ = mark;  // 'e' belongs to a following identifier, not this number
      }
    }
    // rational form: integer '/' positive_integer
    if (!is_decimal && pos_ < src_.size() && src_[pos_] == '/') {
      ++pos_;
      const std::size_t den_start = pos_;
      digits();
      if (den_start == pos_)
        throw ParseError("expected positive integer denominator", pos_);
      double num = 0, den = 0;
      std::from_chars(src_.data() + start, src_.data() + src_.size(), num);
      std::from_chars(src_.data() + den_start, src_.data() + src_.size(), den);
      if (den == 0) throw ParseError("zero denominator", den_start);
      tok_.kind = Token::kNumber;
      tok_.value = num / den;
      return;
    }
    double v = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc())
      throw ParseError("malformed number", start);
    tok_.kind = Token::kNumber;
    tok_.value = v;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names, std::string_view param)
      : lex_(text), names_(names), param_(param), nvars_(static_cast<int>(names.size())) {}

  MultiPoly run() {
    MultiPoly p = expr();
    const Token& t = lex_.peek();
    if (t.kind != Token::kEnd)
      throw ParseError("unexpected trailing input", t.pos);
    return p;
  }

 private:
  MultiPoly expr() {
    bool negate = false;
    if (lex_.peek().kind == Token::kPlus || lex_.peek().kind == Token::kMinus)
      negate = lex_.take().kind == Token::kMinus;
    MultiPoly acc = term();
    if (negate) acc = -acc;
    while (lex_.peek().kind == Token::kPlus || lex_.peek().kind == Token::kMinus) {
      const bool minus = lex_.take().kind == Token::kMinus;
      MultiPoly t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (lex_.peek().kind == Token::kStar) {
      lex_.take();
      acc = acc * factor();
    }
    return acc;
  }

  MultiPoly factor() {
    MultiPoly b = base();
    if (lex_.peek().kind == Token::kCaret) {
      lex_.take();
      const Token t = lex_.take();
      if (t.kind != Token::kNumber || t.value != std::floor(t.value) || t.value < 0)
        throw ParseError("expected non-negative integer exponent", t.pos);
      const int k = static_cast<int>(t.value);
      MultiPoly r = MultiPoly::constant(nvars_, 1.0);
      for (int j = 0; j < k; ++j) r = r * b;
      return r;
    }
    return b;
  }

  MultiPoly base() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::kNumber:
        return MultiPoly::constant(nvars_, t.value);
      case Token::kIdent: {
        for (int j = 0; j < nvars_; ++j)
          if (names_[j] == t.text) return MultiPoly::variable(nvars_, j);
        if (!param_.empty() && t.text == param_) return MultiPoly::parameter(nvars_);
        if (t.text == "i") return MultiPoly::constant(nvars_, Complex(0.0, 1.0));
        throw ParseError("unknown identifier '" + t.text + "'", t.pos);
      }
      case Token::kLParen: {
        MultiPoly inner = expr();
        const Token close = lex_.take();
        if (close.kind != Token::kRParen)
          throw ParseError("expected ')'", close.pos);
        return inner;
      }
      default:
        throw ParseError("expected identifier, number or '('", t.pos);
    }
  }

  Lexer lex_;
  std::span<const std::string> names_;
  std::string_view param_;
  int nvars_;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, std::span<const std::string> variable_names,
                     std::string_view parameter_name) {
  if (variable_names.empty())
    throw std::invalid_argument("parse_poly: need at least one variable name");
  return Parser(text, variable_names, parameter_name).run();
}

}  // namespace bbres
