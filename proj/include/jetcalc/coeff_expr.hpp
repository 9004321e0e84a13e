#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "jetcalc/poly.hpp"

namespace jetcalc {

/// Element of the coefficient field: a reduced fraction of polynomials in
/// function atoms, u and constants.
///
/// Canonical form: related constants appear with exponent below 2 and never in
/// the denominator, gcd(num, den) = 1 and the denominator is monic with respect
/// to its canonical leading term. Two values are equal iff their
/// representations are identical.
class CoeffExpr {
 public:
  CoeffExpr() : den_(1L) {}
  CoeffExpr(long value) : num_(value), den_(1L) {}  // NOLINT(google-explicit-constructor)
  CoeffExpr(const Rational& value) : num_(value), den_(1L) {}  // NOLINT(google-explicit-constructor)
  explicit CoeffExpr(const Poly& poly);
  static CoeffExpr fraction(const Poly& num, const Poly& den);

  static CoeffExpr atom(Atom atom);
  static CoeffExpr u() { return atom(Atom::identity()); }
  static CoeffExpr function(std::string_view name, unsigned order = 0) { return atom(Atom::function(name, order)); }
  static CoeffExpr constant(std::string_view name) { return atom(Atom::constant(name)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  /// True when no atom occurs at all.
  bool is_rational() const { return num_.is_constant() && den_.is_one(); }
  Rational rational_value() const;
  bool contains(Atom atom) const { return num_.contains(atom) || den_.contains(atom); }
  std::vector<Atom> atoms() const;

  CoeffExpr operator-() const;
  friend CoeffExpr operator+(const CoeffExpr& a, const CoeffExpr& b);
  friend CoeffExpr operator-(const CoeffExpr& a, const CoeffExpr& b);
  friend CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b);
  friend CoeffExpr operator/(const CoeffExpr& a, const CoeffExpr& b);
  CoeffExpr& operator+=(const CoeffExpr& b) { return *this = *this + b; }
  CoeffExpr& operator-=(const CoeffExpr& b) { return *this = *this - b; }
  CoeffExpr& operator*=(const CoeffExpr& b) { return *this = *this * b; }
  CoeffExpr& operator/=(const CoeffExpr& b) { return *this = *this / b; }
  CoeffExpr scaled(const Rational& factor) const;
  CoeffExpr inverse() const;
  CoeffExpr pow(int exponent) const;

  friend bool operator==(const CoeffExpr& a, const CoeffExpr& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const CoeffExpr& a, const CoeffExpr& b) { return !(a == b); }
  /// Equality decided by num(a)·den(b) − num(b)·den(a) = 0.
  static bool cross_equal(const CoeffExpr& a, const CoeffExpr& b);

  /// Derivative in u: f^(k) -> f^(k+1), u -> 1, constants -> 0.
  CoeffExpr d_u() const;

  /// Exact value under an assignment of every atom. Throws on a missing atom,
  /// a zero denominator or an assignment violating a constant relation.
  Rational eval_at(const std::map<Atom, Rational>& sigma) const;

  /// Evaluation into any field-like type.
  template <typename Value, typename AtomValue>
  Value evaluate(AtomValue&& value_of, const std::function<Value(const Rational&)>& lift) const {
    Value n = num_.evaluate<Value>(value_of, lift);
    if (den_.is_one()) return n;
    Value d = den_.evaluate<Value>(value_of, lift);
    return n / d;
  }

  /// Replaces atoms by expressions; atoms without an entry stay.
  CoeffExpr substitute(const std::map<Atom, CoeffExpr>& values) const;

  std::string to_string() const;

 private:
  CoeffExpr(Poly num, Poly den, bool) : num_(std::move(num)), den_(std::move(den)) {}
  void canonicalize();

  Poly num_;
  Poly den_;
};

std::ostream& operator<<(std::ostream& os, const CoeffExpr& e);

/// Integer-coefficient rendering of a polynomial, used by the printers.
std::string poly_to_string(const Poly& p);

}  // namespace jetcalc
