#pragma once

#include "jetcalc/series.hpp"

namespace jetcalc {

/// Declared dispersionless part v = M0(u) together with its inverse u = N0(v).
/// Both are written in the single coefficient variable u.
struct LeadingPair {
  CoeffExpr m0 = CoeffExpr::u();
  CoeffExpr n0 = CoeffExpr::u();
  bool is_identity() const { return m0 == CoeffExpr::u() && n0 == CoeffExpr::u(); }
};

/// v = M0(u) + sum_{k>=1} eps^k M_k(u, u_x, ...), deg M_k = k.
class MiuraMap {
 public:
  MiuraMap() : corrections_(SeriesKind::miura_correction, 0, {}) {}
  /// Checks M0(N0(v)) = v by rational substitution.
  MiuraMap(LeadingPair leading, EpsSeries corrections);
  static MiuraMap identity(unsigned n);
  /// Splits a full series v = M0 + ... into leading part and corrections.
  static MiuraMap from_series(const EpsSeries& full, const CoeffExpr& n0 = CoeffExpr::u());

  const LeadingPair& leading() const { return leading_; }
  const EpsSeries& corrections() const { return corrections_; }
  unsigned truncation() const { return corrections_.truncation(); }
  bool is_identity_leading() const { return leading_.is_identity(); }
  /// The whole map as a general series with eps^0 part M0.
  EpsSeries series() const;

  friend bool operator==(const MiuraMap& a, const MiuraMap& b) {
    return a.leading_.m0 == b.leading_.m0 && a.leading_.n0 == b.leading_.n0 && a.corrections_ == b.corrections_;
  }

  std::string to_string() const;

 private:
  LeadingPair leading_;
  EpsSeries corrections_;
};

/// sum_j dm/du_(j) * Dx^j X, the prolonged Jacobian of `m` applied to `x`.
EpsSeries apply_prolonged_jacobian(const EpsSeries& m, const EpsSeries& x, unsigned n,
                                   unsigned max_jet = 2 * kDefaultMaxJet);

/// u = m^{-1}(v) to order eps^N by fixed-point iteration.
MiuraMap formal_inverse(const MiuraMap& m, unsigned n);

/// (m2 o m1)(u) = m2(m1(u)).
MiuraMap compose(const MiuraMap& m2, const MiuraMap& m1, unsigned n);

/// The flow u_t = X written in the variable v = m(u).
EpsSeries pushforward(const MiuraMap& m, const EpsSeries& x, unsigned n);

/// J(g) X_v - X_u|_{u = g(v)}; zero iff u = g(v) maps the v-flow onto the u-flow.
EpsSeries verify_conjugacy(const EpsSeries& g, const EpsSeries& xv, const EpsSeries& xu, unsigned n);

/// Whether quasilinear coefficients survive the pushforward order by order.
bool quasilinear_invariance_check(const MiuraMap& m, const EpsSeries& x, unsigned n);

/// Quasilinear coefficients per eps-order.
std::map<unsigned, std::map<unsigned, CoeffExpr>> quasilinear_profile(const EpsSeries& s);

}  // namespace jetcalc
