#pragma once

#include <string>
#include <string_view>

#include "jetcalc/series.hpp"

namespace jetcalc {

/// Syntax error carrying a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, unsigned line, unsigned column);
  unsigned line() const { return line_; }
  unsigned column() const { return column_; }

 private:
  unsigned line_;
  unsigned column_;
};

/// Text grammar shared by every module:
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' ['-'] integer)?
///   atom   := integer | name primes ['(u)'] | 'u' | 'u'<j> | 'eps'
///           | 'Dx' '(' expr ')' | '(' expr ')'
///
/// Names denote functions of u unless declared as constants; primes count
/// u-derivatives; `id` is u. Division and negative powers need a jet-free
/// eps^0 operand.
EpsSeries parse_series(std::string_view text, unsigned truncation, unsigned max_jet = kDefaultMaxJet);
DiffPoly parse_diffpoly(std::string_view text, unsigned max_jet = kDefaultMaxJet);
CoeffExpr parse_coeff(std::string_view text);

/// Parses a constant declaration `name` or `name^2 = q*m` (m a product of
/// declared constants) and declares it.
Atom parse_constant_declaration(std::string_view text);

}  // namespace jetcalc
