#include "liereduce/parse.hpp"

#include <cctype>

namespace liereduce {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const SymbolResolver& resolve, const FunctionTable* functions)
      : text_(text), resolve_(resolve), functions_(functions) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    fail_at(pos_, what);
  }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& what) const {
    throw ExprParseError("parse error at column " + std::to_string(pos + 1) + ": " + what + " in '" +
                             std::string(text_) + "'",
                         pos, what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = accept('-') ? -term() : term();
    for (;;) {
      if (accept('+')) {
        e += term();
      } else if (accept('-')) {
        e -= term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = power();
    for (;;) {
      if (accept('*')) {
        e *= power();
      } else if (accept('/')) {
        Expr d = power();
        if (d.is_zero()) fail("zero denominator");
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      bool neg = accept('-');
      skip_ws();
      std::string digits = integer_literal();
      if (digits.empty()) fail("expected integer exponent");
      if (digits.size() > 6) fail("exponent too large");
      int e = std::stoi(digits);
      if (neg && base.is_zero()) fail("zero denominator");
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  std::string integer_literal() {
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits.push_back(text_[pos_++]);
    return digits;
  }

  std::string identifier() {
    skip_ws();
    std::string name;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\'')) {
        name.push_back(text_[pos_++]);
      }
    }
    return name;
  }

  Symbol symbol(const std::string& name, std::size_t start) {
    if (!resolve_) return Symbol::intern(name);
    try {
      return resolve_(name);
    } catch (const ExprParseError&) {
      throw;
    } catch (const Error& e) {
      fail_at(start, e.what());
    }
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      return Expr(Rational(mpz_class(integer_literal())));
    }
    const std::size_t start = pos_;
    std::string name = identifier();
    if (name.empty()) fail("expected expression");
    if (name == "d" && accept('(')) {
      std::vector<std::string> parts;
      do {
        std::string part = identifier();
        if (part.empty()) fail("expected identifier in derivative");
        parts.push_back(part);
      } while (accept(','));
      expect(')');
      if (parts.size() < 2) fail("derivative needs a variable");
      if (functions_) {
        auto f = Symbol::lookup(parts[0]);
        if (f && functions_->declared(*f)) {
          Symbol s = *f;
          for (std::size_t k = 1; k < parts.size(); ++k) {
            auto x = Symbol::lookup(parts[k]);
            auto p = x ? functions_->partial(s, *x) : std::nullopt;
            if (!p) fail("'" + parts[0] + "' does not depend on '" + parts[k] + "'");
            s = *p;
          }
          return Expr(s);
        }
      }
      std::string full = "d(" + parts[0];
      for (std::size_t k = 1; k < parts.size(); ++k) full += "," + parts[k];
      return Expr(symbol(full + ")", start));
    }
    return Expr(symbol(name, start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  const SymbolResolver& resolve_;
  const FunctionTable* functions_;
};

}  // namespace

Expr parse_expr(std::string_view text, const SymbolResolver& resolve, const FunctionTable* functions) {
  return Parser(text, resolve, functions).parse();
}

}  // namespace liereduce
