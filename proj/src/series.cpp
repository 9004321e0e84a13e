#include "jetcalc/series.hpp"

#include <sstream>

namespace jetcalc {

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::current:
      return "current";
    case SeriesKind::vectorfield:
      return "vectorfield";
    case SeriesKind::miura_correction:
      return "miura-correction";
    case SeriesKind::general:
      return "general";
  }
  return "general";
}

SeriesKind series_kind_from_string(const std::string& name) {
  if (name == "current") return SeriesKind::current;
  if (name == "vectorfield") return SeriesKind::vectorfield;
  if (name == "miura-correction") return SeriesKind::miura_correction;
  if (name == "general") return SeriesKind::general;
  throw Error("unknown series kind '" + name + "'");
}

std::optional<unsigned> expected_degree(SeriesKind kind, unsigned k) {
  switch (kind) {
    case SeriesKind::current:
    case SeriesKind::miura_correction:
      return k;
    case SeriesKind::vectorfield:
      return k + 1;
    case SeriesKind::general:
      return std::nullopt;
  }
  return std::nullopt;
}

EpsSeries::EpsSeries(SeriesKind kind, unsigned truncation, Components components) : kind_(kind), n_(truncation) {
  for (auto& [k, p] : components) {
    if (k > truncation || p.is_zero()) continue;
    if (kind == SeriesKind::miura_correction && k == 0) {
      throw Error("miura-correction series has a nonzero eps^0 component: " + p.to_string());
    }
    if (auto d = expected_degree(kind, k)) {
      if (auto bad = p.off_degree_term(*d)) {
        throw Error(jetcalc::to_string(kind) + " component at eps^" + std::to_string(k) + " must have degree " +
                    std::to_string(*d) + ", offending term " + bad->to_string() + " has degree " +
                    std::to_string(bad->degree()));
      }
    }
    components_.emplace(k, std::move(p));
  }
}

DiffPoly EpsSeries::component(unsigned k) const {
  auto it = components_.find(k);
  return it == components_.end() ? DiffPoly{} : it->second;
}

std::optional<unsigned> EpsSeries::lowest_order() const {
  if (components_.empty()) return std::nullopt;
  return components_.begin()->first;
}

EpsSeries EpsSeries::truncate(unsigned n) const { return EpsSeries(kind_, std::min(n, n_), components_); }

EpsSeries EpsSeries::scaled(const CoeffExpr& c) const {
  return map_components([&](const DiffPoly& p) { return p.scaled(c); });
}

EpsSeries EpsSeries::map_components(const std::function<DiffPoly(const DiffPoly&)>& fn) const {
  Components out;
  for (const auto& [k, p] : components_) out.emplace(k, fn(p));
  return EpsSeries(kind_, n_, std::move(out));
}

namespace {

SeriesKind join_kind(const EpsSeries& a, const EpsSeries& b) {
  if (a.kind() == b.kind()) return a.kind();
  if (a.is_zero()) return b.kind();
  if (b.is_zero()) return a.kind();
  if (a.kind() == SeriesKind::general || b.kind() == SeriesKind::general) return SeriesKind::general;
  // Currents and Miura corrections share the grading.
  auto both = [&](SeriesKind x, SeriesKind y) {
    return (a.kind() == x && b.kind() == y) || (a.kind() == y && b.kind() == x);
  };
  if (both(SeriesKind::current, SeriesKind::miura_correction)) return SeriesKind::current;
  throw Error("cannot combine a " + to_string(a.kind()) + " with a " + to_string(b.kind()));
}

}  // namespace

EpsSeries operator+(const EpsSeries& a, const EpsSeries& b) {
  unsigned n = std::min(a.n_, b.n_);
  EpsSeries::Components out;
  for (const auto& [k, p] : a.components_) {
    if (k <= n) out[k] += p;
  }
  for (const auto& [k, p] : b.components_) {
    if (k <= n) out[k] += p;
  }
  return EpsSeries(join_kind(a, b), n, std::move(out));
}

EpsSeries operator-(const EpsSeries& a, const EpsSeries& b) { return a + (-b); }

EpsSeries operator*(const EpsSeries& a, const EpsSeries& b) {
  unsigned n = std::min(a.n_, b.n_);
  EpsSeries::Components out;
  for (const auto& [ka, pa] : a.components_) {
    for (const auto& [kb, pb] : b.components_) {
      if (ka + kb > n) break;
      out[ka + kb] += pa * pb;
    }
  }
  return EpsSeries(SeriesKind::general, n, std::move(out));
}

std::string EpsSeries::to_string() const {
  if (components_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, p] : components_) {
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << (p.size() > 1 && components_.size() > 1 ? "(" + p.to_string() + ")" : p.to_string());
    } else {
      os << "eps";
      if (k > 1) os << '^' << k;
      os << "*(" << p.to_string() << ")";
    }
  }
  return os.str();
}

EpsSeries curl_to_flow(const EpsSeries& current, unsigned max_jet) {
  if (current.kind() != SeriesKind::current) throw Error("curl_to_flow expects a current");
  EpsSeries::Components out;
  for (const auto& [k, p] : current.components()) out.emplace(k, total_x_derivative(p, max_jet));
  return EpsSeries(SeriesKind::vectorfield, current.truncation(), std::move(out));
}

EpsSeries neumann_invert(const EpsSeries& v, unsigned n, unsigned max_jet) {
  if (n % 2 != 0) throw Error("Neumann inversion needs an even truncation order");
  unsigned top = std::min(n, v.truncation());
  EpsSeries::Components out;
  for (const auto& [k, p] : v.components()) {
    DiffPoly d = p;
    for (unsigned s = 0; k + s <= top; s += 2) {
      out[k + s] += d;
      if (k + s + 2 > top) break;
      d = total_x_derivative(d, 2, max_jet);
    }
  }
  return EpsSeries(v.kind(), top, std::move(out));
}

CoeffExpr substitute_u(const CoeffExpr& c, const CoeffExpr& g) {
  if (g == CoeffExpr::u()) return c;
  for (Atom a : c.atoms()) {
    if (a.is_function()) {
      throw Error("substitution into '" + a.to_string() +
                  "' requires an undeclared functional inverse; only u and constants may appear when the leading "
                  "part is not the identity");
    }
  }
  return c.substitute({{Atom::identity(), g}});
}

EpsSeries substitute_jets(const DiffPoly& p, const EpsSeries& g, unsigned n, unsigned max_jet) {
  DiffPoly g0 = g.component(0);
  if (auto bad = g0.off_degree_term(0)) {
    throw Error("substitution series must have a jet-free eps^0 part, found " + bad->to_string());
  }
  CoeffExpr lead = g0.constant_part();
  if (lead.is_zero()) throw Error("substitution series has a vanishing leading part");
  EpsSeries::Components delta_c;
  for (const auto& [k, q] : g.components()) {
    if (k > 0 && k <= n) delta_c.emplace(k, q);
  }
  EpsSeries delta(SeriesKind::general, n, delta_c);
  EpsSeries gs(SeriesKind::general, n, g.components());

  std::vector<EpsSeries> dg{gs};
  unsigned top = p.max_jet();
  for (unsigned j = 1; j <= top; ++j) {
    dg.push_back(dg.back().map_components([&](const DiffPoly& q) { return total_x_derivative(q, max_jet); }));
  }
  std::vector<EpsSeries> delta_pow{EpsSeries(SeriesKind::general, n, {{0, DiffPoly(1L)}})};

  EpsSeries out(SeriesKind::general, n, {});
  for (const auto& [m, c] : p.terms()) {
    EpsSeries coeff(SeriesKind::general, n, {});
    CoeffExpr deriv = c;
    Rational factorial(1);
    for (unsigned k = 0; k <= n && !deriv.is_zero(); ++k) {
      if (k > 0) {
        if (delta_pow.size() <= k) delta_pow.push_back(delta_pow.back() * delta);
        factorial *= k;
      }
      if (delta_pow[k].is_zero()) break;
      CoeffExpr value = substitute_u(deriv, lead).scaled(1 / factorial);
      coeff = coeff + delta_pow[k].scaled(value);
      deriv = deriv.d_u();
    }
    EpsSeries term = coeff;
    for (const auto& pw : m.powers()) {
      for (unsigned e = 0; e < pw.exp; ++e) term = term * dg[pw.jet];
    }
    out = out + term;
  }
  return out;
}

EpsSeries substitute_series(const EpsSeries& s, const EpsSeries& g, unsigned n, unsigned max_jet) {
  unsigned top = std::min(n, s.truncation());
  EpsSeries::Components out;
  for (const auto& [k, p] : s.components()) {
    if (k > top) continue;
    EpsSeries part = substitute_jets(p, g, top - k, max_jet);
    for (const auto& [j, q] : part.components()) out[k + j] += q;
  }
  return EpsSeries(SeriesKind::general, top, std::move(out));
}

}  // namespace jetcalc
