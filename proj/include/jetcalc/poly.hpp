#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "jetcalc/symbols.hpp"

namespace jetcalc {

struct Factor {
  std::uint32_t key;
  std::uint32_t exp;
  auto operator<=>(const Factor&) const = default;
};

/// Power product of atoms, factors sorted by atom key.
class Monomial {
 public:
  using Storage = boost::container::small_vector<Factor, 4>;

  Monomial() = default;
  static Monomial of(Atom atom, std::uint32_t exp = 1);

  const Storage& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::uint32_t total_degree() const;
  std::uint32_t degree_in(Atom atom) const;
  Monomial without(Atom atom) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  bool divides(const Monomial& other) const;
  /// Requires divides(other) to hold.
  Monomial quotient(const Monomial& divisor) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);

  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    return std::lexicographical_compare_three_way(a.factors_.begin(), a.factors_.end(), b.factors_.begin(),
                                                  b.factors_.end());
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }

  Storage& mutable_factors() { return factors_; }

 private:
  Storage factors_;
};

/// Graded order with atoms compared by name, the one used for canonical signs
/// and printing. Returns <0, 0 or >0.
int canonical_compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Sparse multivariate polynomial over the rationals, terms sorted by monomial.
class Poly {
 public:
  Poly() = default;
  Poly(long value);  // NOLINT(google-explicit-constructor)
  Poly(const Rational& value);  // NOLINT(google-explicit-constructor)
  static Poly atom(Atom atom, std::uint32_t exp = 1);
  static Poly term(Monomial mono, Rational coeff);
  /// Builds from unsorted terms, merging duplicates and dropping zeros.
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  Rational constant_term() const;
  bool is_single_term() const { return terms_.size() == 1; }

  std::uint32_t degree_in(Atom atom) const;
  bool contains(Atom atom) const;
  /// Distinct atoms, ordered by key.
  std::vector<Atom> atoms() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly scaled(const Rational& factor) const;
  Poly times(const Monomial& mono) const;
  Poly pow(unsigned exponent) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly partial(Atom atom) const;
  /// Total u-derivative: function atoms step their order, u maps to 1.
  Poly du() const;

  /// Coefficients with respect to one atom; index = power.
  std::vector<Poly> coefficients_in(Atom atom) const;
  static Poly from_coefficients(Atom atom, const std::vector<Poly>& coefficients);

  /// Rewrites related constants until every exponent is below 2.
  Poly reduce_relations() const;
  bool has_related_constants() const;

  /// Positive rational c with this = c * (integer primitive polynomial).
  Rational content() const;
  Poly primitive() const;
  Monomial monomial_content() const;

  /// Leading term under `canonical_compare`.
  const Term& canonical_leading() const;

  /// Throws if `divisor` does not divide exactly.
  Poly divide_exact(const Poly& divisor) const;
  Poly divide_monomial(const Monomial& mono) const;

  /// Primitive integer gcd with positive canonical leading coefficient.
  static Poly gcd(const Poly& a, const Poly& b);

  template <typename Value, typename AtomValue>
  Value evaluate(AtomValue&& value_of, const std::function<Value(const Rational&)>& lift) const {
    Value total = lift(Rational(0));
    for (const Term& t : terms_) {
      Value product = lift(t.coeff);
      for (const Factor& f : t.mono.factors()) {
        Value base = value_of(Atom::from_key(f.key));
        for (std::uint32_t e = 0; e < f.exp; ++e) product = product * base;
      }
      total = total + product;
    }
    return total;
  }

  /// Terms in descending canonical order, for printing.
  std::vector<const Term*> canonical_terms() const;

 private:
  std::vector<Term> terms_;
};

std::string monomial_to_string(const Monomial& mono);

}  // namespace jetcalc
