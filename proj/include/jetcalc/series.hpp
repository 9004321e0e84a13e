#pragma once

#include <map>
#include <string>

#include "jetcalc/jet.hpp"

namespace jetcalc {

enum class SeriesKind {
  current,           // eps^k component homogeneous of degree k, eps^0 free of jets
  vectorfield,       // eps^k component homogeneous of degree k + 1
  miura_correction,  // eps^k component (k >= 1) homogeneous of degree k
  general,           // no grading constraint
};

std::string to_string(SeriesKind kind);
SeriesKind series_kind_from_string(const std::string& name);

/// Truncated series sum_{k <= N} eps^k P_k with graded components.
class EpsSeries {
 public:
  using Components = std::map<unsigned, DiffPoly>;

  EpsSeries() = default;
  /// Validates the grading of every component; components above N are dropped.
  EpsSeries(SeriesKind kind, unsigned truncation, Components components);

  SeriesKind kind() const { return kind_; }
  unsigned truncation() const { return n_; }
  const Components& components() const { return components_; }
  /// Zero when absent.
  DiffPoly component(unsigned k) const;
  bool is_zero() const { return components_.empty(); }
  /// Lowest order with a nonzero component, if any.
  std::optional<unsigned> lowest_order() const;

  EpsSeries truncate(unsigned n) const;
  EpsSeries with_kind(SeriesKind kind) const { return EpsSeries(kind, n_, components_); }
  EpsSeries scaled(const CoeffExpr& c) const;
  EpsSeries operator-() const { return scaled(CoeffExpr(-1L)); }
  friend EpsSeries operator+(const EpsSeries& a, const EpsSeries& b);
  friend EpsSeries operator-(const EpsSeries& a, const EpsSeries& b);
  /// Product; kind becomes general.
  friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b);
  EpsSeries map_components(const std::function<DiffPoly(const DiffPoly&)>& fn) const;

  friend bool operator==(const EpsSeries& a, const EpsSeries& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_ && a.components_ == b.components_;
  }

  std::string to_string() const;

 private:
  SeriesKind kind_ = SeriesKind::general;
  unsigned n_ = 0;
  Components components_;
};

/// Degree required at eps^k for a kind, or nullopt when unconstrained.
std::optional<unsigned> expected_degree(SeriesKind kind, unsigned k);

/// Componentwise total x-derivative of a current.
EpsSeries curl_to_flow(const EpsSeries& current, unsigned max_jet = kDefaultMaxJet);

/// Applies (1 - eps^2 Dx^2)^{-1} = sum_k eps^{2k} Dx^{2k}, truncated at eps^N.
EpsSeries neumann_invert(const EpsSeries& v, unsigned n, unsigned max_jet = kDefaultMaxJet);

/// Replaces every u_(k) of `p` by Dx^k g and the coefficient variable u by the
/// series g, expanding coefficients in Taylor series around g's eps^0 part.
/// When that part is not u itself, coefficients may only involve u and
/// constants. Result kind is general, truncated at eps^N.
EpsSeries substitute_jets(const DiffPoly& p, const EpsSeries& g, unsigned n, unsigned max_jet = kDefaultMaxJet);

/// Applies substitute_jets to every component of `s`, shifting by its order.
EpsSeries substitute_series(const EpsSeries& s, const EpsSeries& g, unsigned n, unsigned max_jet = kDefaultMaxJet);

/// Substitutes u := g in a coefficient; g must be jet-free.
CoeffExpr substitute_u(const CoeffExpr& c, const CoeffExpr& g);

}  // namespace jetcalc
