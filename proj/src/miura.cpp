#include "jetcalc/miura.hpp"

namespace jetcalc {

MiuraMap::MiuraMap(LeadingPair leading, EpsSeries corrections)
    : leading_(std::move(leading)), corrections_(std::move(corrections)) {
  if (corrections_.kind() != SeriesKind::miura_correction) {
    corrections_ = corrections_.with_kind(SeriesKind::miura_correction);
  }
  if (leading_.m0.is_zero() || leading_.m0.d_u().is_zero()) {
    throw Error("leading part '" + leading_.m0.to_string() + "' is not invertible");
  }
  if (!leading_.is_identity()) {
    CoeffExpr forward = substitute_u(leading_.m0, leading_.n0);
    CoeffExpr backward = substitute_u(leading_.n0, leading_.m0);
    if (forward != CoeffExpr::u() || backward != CoeffExpr::u()) {
      throw Error("declared inverse '" + leading_.n0.to_string() + "' does not invert '" + leading_.m0.to_string() +
                  "'");
    }
  }
}

MiuraMap MiuraMap::identity(unsigned n) {
  return MiuraMap(LeadingPair{}, EpsSeries(SeriesKind::miura_correction, n, {}));
}

MiuraMap MiuraMap::from_series(const EpsSeries& full, const CoeffExpr& n0) {
  DiffPoly p0 = full.component(0);
  if (auto bad = p0.off_degree_term(0)) {
    throw Error("the eps^0 part of a Miura map must be free of jets, found " + bad->to_string());
  }
  EpsSeries::Components rest;
  for (const auto& [k, p] : full.components()) {
    if (k > 0) rest.emplace(k, p);
  }
  return MiuraMap(LeadingPair{p0.constant_part(), n0},
                  EpsSeries(SeriesKind::miura_correction, full.truncation(), std::move(rest)));
}

EpsSeries MiuraMap::series() const {
  EpsSeries::Components c = corrections_.components();
  c[0] = DiffPoly(leading_.m0);
  return EpsSeries(SeriesKind::general, truncation(), std::move(c));
}

std::string MiuraMap::to_string() const { return "v = " + series().to_string(); }

EpsSeries apply_prolonged_jacobian(const EpsSeries& m, const EpsSeries& x, unsigned n, unsigned max_jet) {
  unsigned top = std::min({n, m.truncation(), x.truncation()});
  EpsSeries::Components out;
  for (const auto& [a, ma] : m.components()) {
    if (a > top) break;
    unsigned jmax = ma.max_jet();
    for (unsigned j = 0; j <= jmax; ++j) {
      DiffPoly dm = partial(ma, j);
      if (dm.is_zero()) continue;
      for (const auto& [b, xb] : x.components()) {
        if (a + b > top) break;
        out[a + b] += dm * total_x_derivative(xb, j, max_jet);
      }
    }
  }
  return EpsSeries(SeriesKind::general, top, std::move(out));
}

MiuraMap formal_inverse(const MiuraMap& m, unsigned n) {
  const LeadingPair& lead = m.leading();
  EpsSeries target(SeriesKind::general, n, {{0, DiffPoly(CoeffExpr::u())}});
  EpsSeries inv(SeriesKind::general, n, {{0, DiffPoly(lead.n0)}});
  CoeffExpr slope = substitute_u(lead.m0.d_u(), lead.n0);
  EpsSeries forward = m.series().truncate(n);
  for (unsigned iter = 0; iter <= n + 1; ++iter) {
    EpsSeries residual = target - substitute_series(forward, inv, n);
    if (residual.is_zero()) {
      return MiuraMap::from_series(inv, lead.m0);
    }
    if (iter == n + 1) break;
    inv = inv + residual.scaled(slope.inverse());
  }
  throw Error("formal inversion did not converge");
}

MiuraMap compose(const MiuraMap& m2, const MiuraMap& m1, unsigned n) {
  EpsSeries s = substitute_series(m2.series(), m1.series(), n);
  CoeffExpr n0 = substitute_u(m1.leading().n0, m2.leading().n0);
  return MiuraMap::from_series(s, n0);
}

EpsSeries pushforward(const MiuraMap& m, const EpsSeries& x, unsigned n) {
  if (m.is_identity_leading() && m.corrections().is_zero()) return x.truncate(n);
  EpsSeries y = apply_prolonged_jacobian(m.series(), x, n);
  MiuraMap inv = formal_inverse(m, n);
  EpsSeries out = substitute_series(y, inv.series(), n);
  return out.with_kind(x.kind());
}

EpsSeries verify_conjugacy(const EpsSeries& g, const EpsSeries& xv, const EpsSeries& xu, unsigned n) {
  EpsSeries lhs = apply_prolonged_jacobian(g, xv, n);
  EpsSeries rhs = substitute_series(xu, g, n);
  return lhs - rhs;
}

std::map<unsigned, std::map<unsigned, CoeffExpr>> quasilinear_profile(const EpsSeries& s) {
  std::map<unsigned, std::map<unsigned, CoeffExpr>> out;
  for (const auto& [k, p] : s.components()) {
    auto q = quasilinear_part(p);
    if (!q.empty()) out.emplace(k, std::move(q));
  }
  return out;
}

bool quasilinear_invariance_check(const MiuraMap& m, const EpsSeries& x, unsigned n) {
  if (!m.is_identity_leading()) throw Error("quasilinear invariance needs an identity-leading map");
  return quasilinear_profile(pushforward(m, x, n)) == quasilinear_profile(x.truncate(n));
}

}  // namespace jetcalc
