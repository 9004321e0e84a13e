#include "jetcalc/normalform.hpp"

#include <optional>

namespace jetcalc {

std::string to_string(Branch branch) { return branch == Branch::viscous ? "viscous" : "dispersive"; }

Branch branch_from_string(const std::string& name) {
  if (name == "dispersive") return Branch::dispersive;
  if (name == "viscous") return Branch::viscous;
  throw Error("unknown branch '" + name + "'");
}

std::vector<JetMonomial> normal_basis(unsigned degree) {
  std::vector<JetMonomial> out;
  for (const auto& m : monomial_basis(degree)) {
    if (m.exponent(1) == 0) out.push_back(m);
  }
  return out;
}

std::string letter_name(unsigned k, unsigned index, Branch branch) {
  if (branch == Branch::viscous) {
    if (k == 1) return "a";
    return std::string(1, static_cast<char>('b' + (k - 2))) + std::to_string(index);
  }
  if (k % 2 == 1) return "q" + std::to_string(k) + "_" + std::to_string(index);
  return std::string(1, static_cast<char>('b' + (k / 2 - 1))) + std::to_string(index);
}

std::string capital_name(unsigned k, unsigned index, Branch branch) {
  if (branch == Branch::viscous) return "S" + std::to_string(k) + "_" + std::to_string(index);
  if (k % 2 == 1) return "Q" + std::to_string(k) + "_" + std::to_string(index);
  return std::string(1, static_cast<char>('B' + (k / 2 - 1))) + std::to_string(index);
}

namespace {

/// Solves the square system a x = b by Gaussian elimination; nullopt if singular.
std::optional<std::vector<CoeffExpr>> solve_square(std::vector<std::vector<CoeffExpr>> a, std::vector<CoeffExpr> b) {
  std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    CoeffExpr inv = a[col][col].inverse();
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      CoeffExpr factor = a[row][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
      b[row] -= factor * b[col];
    }
  }
  return b;
}

/// T(m) = sum_{j>=1} dm/du_(j) (Dx^{j+1} g - g' u_(j+1)): first-order change of the
/// eps^k current under v = u + eps^k Dx m.
DiffPoly leading_change(const JetMonomial& m, const DiffPoly& g, const CoeffExpr& g1, unsigned max_jet) {
  DiffPoly mono = DiffPoly::term(m, CoeffExpr(1L));
  DiffPoly out;
  DiffPoly dg = total_x_derivative(g, max_jet);
  for (unsigned j = 1; j <= m.max_jet(); ++j) {
    dg = total_x_derivative(dg, max_jet);
    DiffPoly pm = partial(mono, j);
    if (pm.is_zero()) continue;
    out += pm * (dg - DiffPoly::jet(j + 1).scaled(g1));
  }
  return out;
}

}  // namespace

EpsSeries transform_current(const EpsSeries& omega, const DiffPoly& g, unsigned k, unsigned n) {
  unsigned max_jet = 2 * n + 4;
  EpsSeries::Components shifted = omega.components();
  for (const auto& [m, p] : omega.components()) {
    if (m + k > n) break;
    DiffPoly tower = total_x_derivative(p, max_jet);
    DiffPoly add;
    for (unsigned j = 0; j <= g.max_jet(); ++j) {
      DiffPoly pg = partial(g, j);
      if (!pg.is_zero()) add += pg * tower;
      tower = total_x_derivative(tower, max_jet);
    }
    shifted[m + k] += add;
  }
  EpsSeries raised(SeriesKind::general, n, std::move(shifted));
  EpsSeries dg(SeriesKind::miura_correction, n, {{k, total_x_derivative(g, max_jet)}});
  MiuraMap step(LeadingPair{}, dg);
  MiuraMap inverse = formal_inverse(step, n);
  return substitute_series(raised, inverse.series(), n, max_jet).with_kind(SeriesKind::current);
}

NormalForm to_normal_form(const EpsSeries& omega, unsigned n) {
  EpsSeries current = omega.truncate(n).with_kind(SeriesKind::current);
  DiffPoly g = current.component(0);
  CoeffExpr g1 = g.constant_part().d_u();
  if (g1.is_zero()) throw Error("the eps^0 part of the current must depend on u");
  MiuraMap total = MiuraMap::identity(n);
  unsigned max_jet = 2 * n + 4;
  for (unsigned k = 2; k <= n; ++k) {
    DiffPoly wk = current.component(k);
    std::vector<JetMonomial> targets;
    for (const auto& m : monomial_basis(k)) {
      if (m.exponent(1) > 0) targets.push_back(m);
    }
    bool clean = true;
    for (const auto& m : targets) clean = clean && wk.coefficient(m).is_zero();
    if (clean) continue;
    std::vector<JetMonomial> unknowns = monomial_basis(k - 1);
    std::vector<std::vector<CoeffExpr>> a(targets.size(), std::vector<CoeffExpr>(unknowns.size()));
    for (std::size_t c = 0; c < unknowns.size(); ++c) {
      DiffPoly t = leading_change(unknowns[c], g, g1, max_jet);
      for (std::size_t r = 0; r < targets.size(); ++r) a[r][c] = t.coefficient(targets[r]);
    }
    std::vector<CoeffExpr> b;
    for (const auto& m : targets) b.push_back(-wk.coefficient(m));
    auto x = solve_square(a, b);
    if (!x) throw Error("cannot remove the u_x terms at eps^" + std::to_string(k) + ": " + wk.to_string());
    DiffPoly gk;
    for (std::size_t c = 0; c < unknowns.size(); ++c) gk.add_term(unknowns[c], (*x)[c]);
    current = transform_current(current, gk, k, n);
    MiuraMap step(LeadingPair{}, EpsSeries(SeriesKind::miura_correction, n, {{k, total_x_derivative(gk, max_jet)}}));
    total = compose(step, total, n);
    for (const auto& m : targets) {
      if (!current.component(k).coefficient(m).is_zero()) {
        throw Error("reduction left a u_x term at eps^" + std::to_string(k));
      }
    }
  }
  return NormalForm{current, total};
}

std::vector<Letter> normal_letters(const EpsSeries& current) {
  Branch branch = Branch::dispersive;
  for (const auto& [k, p] : current.components()) {
    if (k % 2 == 1 && !p.is_zero()) branch = Branch::viscous;
  }
  std::vector<Letter> out;
  for (const auto& [k, p] : current.components()) {
    if (k == 0) continue;
    if (k == 1) {
      out.push_back(Letter{letter_name(1, 1, branch), 1, JetMonomial::var(1), p.coefficient(JetMonomial::var(1))});
      continue;
    }
    auto basis = normal_basis(k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      out.push_back(Letter{letter_name(k, unsigned(i + 1), branch), k, basis[i], p.coefficient(basis[i])});
    }
  }
  return out;
}

std::vector<Letter> central_invariants(const NormalForm& nf) { return normal_letters(nf.current); }

CoeffExpr transcribed_c2(const CoeffExpr& b1, const CoeffExpr& c1, const CoeffExpr& d1) {
  if (b1.is_zero()) throw Error("c2 relation needs b1 != 0");
  CoeffExpr b1p = b1.d_u();
  CoeffExpr b1pp = b1p.d_u();
  CoeffExpr c1p = c1.d_u();
  CoeffExpr b1sq = b1 * b1;
  CoeffExpr bracket = CoeffExpr(117L) * b1pp * b1sq * b1 - CoeffExpr(84L) * b1sq * b1p * b1p +
                      CoeffExpr(670L) * b1p * c1 - CoeffExpr(330L) * b1sq * c1p + CoeffExpr(560L) * b1 * d1 -
                      CoeffExpr(800L) * c1 * c1;
  return bracket / (CoeffExpr(144L) * b1sq);
}

DependentCoefficients dependent_coefficients(const CoeffExpr& b1, const CoeffExpr& c1, const CoeffExpr& d1) {
  return DependentCoefficients{transcribed_c2(b1, c1, d1)};
}

EpsSeries normal_form_current(unsigned n, Branch branch, bool odd) {
  EpsSeries::Components c;
  c[0] = DiffPoly(CoeffExpr::u() * CoeffExpr::u());
  for (unsigned k = 1; k <= n; ++k) {
    bool present = branch == Branch::viscous || k % 2 == 0 || odd;
    if (!present) continue;
    if (k == 1) {
      if (branch == Branch::viscous) c[1] = DiffPoly::term(JetMonomial::var(1), CoeffExpr::function("a"));
      continue;
    }
    auto basis = normal_basis(k);
    DiffPoly p;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      p.add_term(basis[i], CoeffExpr::function(letter_name(k, unsigned(i + 1), branch)));
    }
    c[k] = p;
  }
  return EpsSeries(SeriesKind::current, n, std::move(c));
}

namespace {

JetMonomial parts(std::initializer_list<unsigned> ps) { return JetMonomial::from_parts(std::vector<unsigned>(ps)); }

}  // namespace

EpsSeries hamiltonian_current(const CoeffExpr& c, const CoeffExpr& p) {
  CoeffExpr c1 = c.d_u();
  CoeffExpr p1 = p.d_u();
  CoeffExpr p2 = p1.d_u();
  EpsSeries::Components out;
  out[0] = DiffPoly(CoeffExpr::u() * CoeffExpr::u() * CoeffExpr(Rational(1, 2)));
  DiffPoly w2;
  w2.add_term(parts({2}), c.scaled(Rational(1, 12)));
  w2.add_term(parts({1, 1}), c1.scaled(Rational(1, 24)));
  out[2] = w2;
  DiffPoly w4;
  w4.add_term(parts({4}), p.scaled(2));
  w4.add_term(parts({3, 1}), p1.scaled(4));
  w4.add_term(parts({2, 2}), p1.scaled(3));
  w4.add_term(parts({2, 1, 1}), p2.scaled(2));
  out[4] = w4;
  return EpsSeries(SeriesKind::current, 4, std::move(out));
}

EpsSeries hamiltonian_normal_current(const CoeffExpr& c, const CoeffExpr& p) {
  CoeffExpr c1 = c.d_u();
  CoeffExpr c2 = c1.d_u();
  EpsSeries::Components out;
  out[0] = DiffPoly(CoeffExpr::u() * CoeffExpr::u() * CoeffExpr(Rational(1, 2)));
  out[2] = DiffPoly::term(parts({2}), c.scaled(Rational(1, 12)));
  DiffPoly w4;
  w4.add_term(parts({4}), p.scaled(2));
  w4.add_term(parts({2, 2}), (CoeffExpr(4L) * c1 * c1 + CoeffExpr(3L) * c * c2).scaled(Rational(1, 1152)));
  out[4] = w4;
  return EpsSeries(SeriesKind::current, 4, std::move(out));
}

MiuraMap hamiltonian_map(const CoeffExpr& c, const CoeffExpr& p) {
  CoeffExpr c1 = c.d_u(), c2 = c1.d_u(), c3 = c2.d_u(), c4 = c3.d_u();
  CoeffExpr p1 = p.d_u(), p2 = p1.d_u();
  CoeffExpr alpha = c1.scaled(Rational(-1, 24));
  CoeffExpr beta0 = -p1 + (c1 * c1 - c * c2).scaled(Rational(1, 384));
  CoeffExpr beta1 = p2.scaled(Rational(-1, 2)) + (CoeffExpr(5L) * c1 * c2 - CoeffExpr(6L) * c * c3).scaled(Rational(1, 1152));
  CoeffExpr beta2 =
      (CoeffExpr(3L) * c2 * c2 + CoeffExpr(2L) * c1 * c3 - CoeffExpr(4L) * c * c4).scaled(Rational(1, 3456));
  DiffPoly g2 = DiffPoly::term(parts({1}), alpha);
  DiffPoly g4;
  g4.add_term(parts({3}), beta0);
  g4.add_term(parts({2, 1}), beta1);
  g4.add_term(parts({1, 1, 1}), beta2);
  EpsSeries::Components corr;
  corr[2] = total_x_derivative(g2);
  corr[4] = total_x_derivative(g4);
  return MiuraMap(LeadingPair{}, EpsSeries(SeriesKind::miura_correction, 4, std::move(corr)));
}

}  // namespace jetcalc
