#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "liereduce/expr.hpp"

namespace liereduce {

/// Resolves an identifier (or a derivative name "d(a,b,...)") to a symbol;
/// throws Error for names that are not allowed.
using SymbolResolver = std::function<Symbol(const std::string& name)>;

/// Parse failure with the 0-based offset into the parsed text and the bare
/// reason (without position decoration).
class ExprParseError : public Error {
 public:
  ExprParseError(const std::string& message, std::size_t offset, std::string reason)
      : Error(message), offset_(offset), reason_(std::move(reason)) {}
  std::size_t offset() const { return offset_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

/// Parses an expression of the grammar
///   expr  := ['-'] term (('+'|'-') term)*
///   term  := power (('*'|'/') power)*
///   power := atom ['^' ['-'] integer]
///   atom  := integer | identifier | 'd(' identifier (',' identifier)+ ')' | '(' expr ')'
/// Function-parameter partials "d(f,a,b)" are canonicalized through
/// `functions` when given. Without a resolver, names are interned as is.
Expr parse_expr(std::string_view text, const SymbolResolver& resolve = {}, const FunctionTable* functions = nullptr);

}  // namespace liereduce
