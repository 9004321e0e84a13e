#pragma once

#include <string>
#include <vector>

#include "jetcalc/normalform.hpp"

namespace jetcalc {

/// A known Miura relation u = map(v) from this entry (variable v) to `target` (variable u).
struct CatalogRelation {
  std::string target;
  std::string map;  // full series in u standing for v, e.g. "-3/2*(u^2 + eps*sqrt2*u1)"
  std::string note;
};

/// One equation of the catalog. The right-hand side is stored as a current
/// (u_t = Dx omega) or as a flow (u_t = X). With `nonevolutionary` the left-hand
/// side is (1 - eps^2 Dx^2) u_t.
struct CatalogEntry {
  std::string name;
  std::string title;
  std::string text;
  SeriesKind kind = SeriesKind::current;
  unsigned truncation = 4;
  bool nonevolutionary = false;
  std::vector<std::string> constants;  // declarations, in order
  std::vector<CatalogRelation> relations;
  std::string conventions;
  std::string note;

  /// Declares the constants and parses `text`.
  EpsSeries series() const;
  /// The evolutionary flow u_t = X, truncated at eps^N.
  EpsSeries flow(unsigned n) const;
};

const std::vector<CatalogEntry>& catalog();
/// Throws on an unknown name.
const CatalogEntry& catalog_entry(const std::string& name);

/// u_t = (1 - eps^2 Dx^2)^{-1} Dx(omega) for an entry whose left-hand side is
/// (1 - eps^2 Dx^2) u_t. N must be even.
EpsSeries evolutionary_form(const CatalogEntry& entry, unsigned n);

/// (1 - eps^2 Dx^2) applied to a flow, truncated at eps^N.
EpsSeries apply_helmholtz(const EpsSeries& x, unsigned n);

/// Current of the flow after u = lambda U, written in U: omega(lambda U) / lambda.
/// Coefficients must be rational functions of u and constants.
EpsSeries rescale_current(const EpsSeries& omega, const Rational& lambda);

/// The lambda that turns a leading part kappa u^2 into u^2.
Rational normalizing_scale(const EpsSeries& omega);

}  // namespace jetcalc
