#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "jetcalc/coeff_expr.hpp"

namespace jetcalc {

inline constexpr unsigned kDefaultMaxJet = 12;

/// Product of jet variables u_(j), j >= 1. Stored as (j, exponent) pairs with
/// j strictly decreasing, i.e. the partition of the degree.
class JetMonomial {
 public:
  struct Power {
    std::uint16_t jet;
    std::uint16_t exp;
    bool operator==(const Power&) const = default;
  };
  using Storage = boost::container::small_vector<Power, 4>;

  JetMonomial() = default;
  static JetMonomial var(unsigned j, unsigned exp = 1);
  /// From a list of parts, e.g. {3, 1} for u3*u1.
  static JetMonomial from_parts(const std::vector<unsigned>& parts);

  const Storage& powers() const { return powers_; }
  bool is_one() const { return powers_.empty(); }
  unsigned degree() const;
  unsigned exponent(unsigned j) const;
  unsigned max_jet() const { return powers_.empty() ? 0 : powers_.front().jet; }
  /// Single u_(k) to the first power.
  bool is_linear_var() const { return powers_.size() == 1 && powers_[0].exp == 1; }
  std::vector<unsigned> parts() const;

  friend JetMonomial operator*(const JetMonomial& a, const JetMonomial& b);
  /// Lowers the exponent of u_(j) by one; requires exponent(j) > 0.
  JetMonomial lowered(unsigned j) const;

  bool operator==(const JetMonomial&) const = default;

  std::string to_string() const;

 private:
  Storage powers_;
};

/// Printing and storage order: degree ascending, then partitions in reverse
/// lexicographic order (u4 before u1*u3 before u2^2).
struct JetOrder {
  bool operator()(const JetMonomial& a, const JetMonomial& b) const;
};

/// Enumerates all monomials of a given degree in `JetOrder`.
std::vector<JetMonomial> monomial_basis(unsigned degree);

/// Differential polynomial with coefficients in the coefficient field.
class DiffPoly {
 public:
  using TermMap = std::map<JetMonomial, CoeffExpr, JetOrder>;

  DiffPoly() = default;
  DiffPoly(const CoeffExpr& c);  // NOLINT(google-explicit-constructor)
  DiffPoly(long c) : DiffPoly(CoeffExpr(c)) {}  // NOLINT(google-explicit-constructor)
  static DiffPoly term(const JetMonomial& m, const CoeffExpr& c);
  /// u_(j) for j >= 1; u_(0) is the coefficient u.
  static DiffPoly jet(unsigned j);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  CoeffExpr coefficient(const JetMonomial& m) const;
  /// Degree-0 part (the coefficient of the unit monomial).
  CoeffExpr constant_part() const { return coefficient(JetMonomial{}); }
  unsigned max_jet() const;
  /// Degree when homogeneous; nullopt for zero or mixed degrees.
  std::optional<unsigned> homogeneous_degree() const;
  bool is_homogeneous(unsigned degree) const;
  /// First monomial whose degree differs from `degree`, if any.
  std::optional<JetMonomial> off_degree_term(unsigned degree) const;

  DiffPoly operator-() const;
  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  DiffPoly& operator+=(const DiffPoly& b);
  DiffPoly& operator-=(const DiffPoly& b);
  DiffPoly scaled(const CoeffExpr& c) const;
  DiffPoly pow(unsigned e) const;
  void add_term(const JetMonomial& m, const CoeffExpr& c);

  friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

  /// Applies `fn` to every coefficient, dropping zeros.
  DiffPoly map_coefficients(const std::function<CoeffExpr(const CoeffExpr&)>& fn) const;
  /// Terms with degree exactly `degree`.
  DiffPoly degree_part(unsigned degree) const;

  std::string to_string() const;

 private:
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const DiffPoly& p);

/// Total x-derivative. Throws if a jet above `max_jet` would be produced.
DiffPoly total_x_derivative(const DiffPoly& p, unsigned max_jet = kDefaultMaxJet);
DiffPoly total_x_derivative(const DiffPoly& p, unsigned times, unsigned max_jet);

/// Partial derivative in u_(j); j = 0 differentiates coefficients in u.
DiffPoly partial(const DiffPoly& p, unsigned j);

/// Variational derivative sum_j (-Dx)^j dP/du_(j).
DiffPoly euler_operator(const DiffPoly& p, unsigned max_jet = 2 * kDefaultMaxJet);

/// Coefficients X_k of the terms X_k * u_(k), keyed by k.
std::map<unsigned, CoeffExpr> quasilinear_part(const DiffPoly& p);

}  // namespace jetcalc
