#include "jetcalc/catalog.hpp"

#include "jetcalc/parse.hpp"

namespace jetcalc {

namespace {

CatalogEntry entry(std::string name, std::string title, std::string text, SeriesKind kind, unsigned n,
                   std::string conventions, std::string note) {
  CatalogEntry e;
  e.name = std::move(name);
  e.title = std::move(title);
  e.text = std::move(text);
  e.kind = kind;
  e.truncation = n;
  e.conventions = std::move(conventions);
  e.note = std::move(note);
  return e;
}

std::vector<CatalogEntry> build_catalog() {
  const SeriesKind cur = SeriesKind::current, vf = SeriesKind::vectorfield;
  std::vector<CatalogEntry> out;

  out.push_back(entry("hopf", "Hopf equation", "1/2*u^2", cur, 0, "u_t = u u_x", "dispersionless limit"));
  out.push_back(entry("burgers", "Burgers equation", "1/2*u^2 + eps*u1", cur, 1, "u_t = u u_x + eps u_xx",
                      "viscous; a = 1 after u = 2U"));
  out.push_back(entry("kdv", "KdV equation", "1/2*u^2 + eps^2*u2", cur, 2, "u_t = u u_x + eps^2 u_xxx",
                      "leading u^2/2; u = 2U gives kdv2"));

  CatalogEntry kdv2 = entry("kdv2", "KdV equation", "u^2 + eps^2*u2", cur, 2, "u_t = 2u u_x + eps^2 u_xxx",
                            "normal form with b1 = 1");
  out.push_back(kdv2);

  CatalogEntry mkdv = entry("mkdv", "modified KdV equation", "-u^3 + eps^2*u2", cur, 6,
                            "v_t = -3v^2 v_x + eps^2 v_xxx", "Miura equivalent to kdv2");
  mkdv.constants = {"sqrt2^2 = 2"};
  mkdv.relations = {{"kdv2", "-3/2*(u^2 + eps*sqrt2*u1)", "u = -3/2 (v^2 + eps sqrt2 v_x)"},
                    {"mkdv-w", "-3/2*u^2", "w = -3/2 v^2"}};
  out.push_back(mkdv);

  out.push_back(entry("mkdv-w", "modified KdV in w = -3v^2/2",
                      "2*u*u1 + eps^2*(u3 - 3/(2*u)*u1*u2 + 3/(4*u^2)*u1^3)", vf, 6,
                      "v = sqrt(-2w/3); dispersionless part 2w w_x", "quasilinear part of kdv2"));

  CatalogEntry gardner = entry("gardner", "Gardner equation", "u^2 - alpha*u^3 + eps^2*u2", cur, 6,
                               "v_t = Dx(v^2 - alpha v^3 + eps^2 v_xx)", "Miura equivalent to kdv2");
  gardner.constants = {"alpha", "s2a^2 = 2*alpha"};
  gardner.relations = {{"kdv2", "u - 3/2*alpha*u^2 - 3/2*s2a*eps*u1", "u = v - 3/2 alpha v^2 - 3/2 sqrt(2 alpha) eps v_x"},
                       {"gardner-w", "u - 3/2*alpha*u^2", "w = v - 3/2 alpha v^2"}};
  out.push_back(gardner);

  CatalogEntry gardner_w =
      entry("gardner-w", "Gardner in w = v - 3 alpha v^2/2",
            "2*u*u1 + eps^2*(u3 + 9*alpha/(1 - 6*alpha*u)*u1*u2 + 27*alpha^2/(1 - 6*alpha*u)^2*u1^3)", vf, 6,
            "v = (1 +- sqrt(1 - 6 alpha w))/(3 alpha)", "quasilinear part of kdv2");
  gardner_w.constants = {"alpha"};
  out.push_back(gardner_w);

  CatalogEntry ch = entry("ch", "Camassa-Holm equation", "-3/2*u^2 + eps^2*(u*u2 + 1/2*u1^2)", cur, 4,
                          "(1 - eps^2 Dx^2) u_t = -3u u_x + eps^2 (u u_xxx + 2u_x u_xx)",
                          "non-evolutionary; u = -2/3 U gives leading U^2");
  ch.nonevolutionary = true;
  out.push_back(ch);

  CatalogEntry dp = entry("dp", "Degasperis-Procesi equation", "-2*u^2 + eps^2*(u*u2 + u1^2)", cur, 4,
                          "(1 - eps^2 Dx^2) u_t = -4u u_x + eps^2 (u u_xxx + 3u_x u_xx)",
                          "non-evolutionary; u = -1/2 U gives leading U^2");
  dp.nonevolutionary = true;
  out.push_back(dp);

  CatalogEntry sk = entry("sk", "Sawada-Kotera equation", "5/3*u^3 + eps^2*5*u*u2 + eps^4*u4", cur, 4,
                          "u_t = Dx(5/3 u^3 + 5 eps^2 u u_xx + eps^4 u_xxxx)", "same quasilinear part as kk");
  out.push_back(sk);
  out.push_back(entry("kk", "Kaup-Kupershmidt equation", "5/3*u^3 + eps^2*(5*u*u2 + 15/4*u1^2) + eps^4*u4", cur, 4,
                      "u_t = Dx(5/3 u^3 + eps^2 (5u u_xx + 15/4 u_x^2) + eps^4 u_xxxx)",
                      "same quasilinear part as sk"));

  out.push_back(entry("hodge-kdv", "Hodge KdV equation", "u^2 + eps^2*1/12*u2 + eps^4*1/120*u4 + eps^6*1/252*u6", cur,
                      6, "normal form with b1 = |B2|/2, c1 = |B4|/4, d1 = |B6|/6",
                      "constant central invariants from Bernoulli numbers"));

  CatalogEntry ham = entry("ham", "Hamiltonian conservation law",
                           "1/2*u^2 + eps^2*1/24*(2*c*u2 + c'*u1^2) + "
                           "eps^4*(2*p*u4 + 4*p'*u1*u3 + 3*p'*u2^2 + 2*p''*u1^2*u2)",
                           cur, 4, "c(u), p(u) arbitrary", "reduces to normham");
  ham.relations = {{"normham", "", "reducing map with alpha = -c'/24 and beta0, beta1, beta2"}};
  out.push_back(ham);
  out.push_back(entry("normham", "Hamiltonian normal form",
                      "1/2*u^2 + eps^2*1/12*c*u2 + eps^4*(2*p*u4 + (4*c'^2 + 3*c*c'')/1152*u2^2)", cur, 4,
                      "c(u), p(u) arbitrary", "b1 = c/12, c1 = 2p"));
  return out;
}

}  // namespace

EpsSeries CatalogEntry::series() const {
  for (const auto& decl : constants) parse_constant_declaration(decl);
  return parse_series(text, truncation).with_kind(kind);
}

EpsSeries CatalogEntry::flow(unsigned n) const {
  if (nonevolutionary) return evolutionary_form(*this, n);
  EpsSeries s = series();
  if (kind == SeriesKind::current) s = curl_to_flow(s);
  return s.truncate(n);
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return e;
  }
  throw Error("unknown catalog entry '" + name + "'");
}

EpsSeries evolutionary_form(const CatalogEntry& entry, unsigned n) {
  if (n % 2 != 0) throw Error("evolutionary form needs an even truncation order");
  EpsSeries s = entry.series();
  EpsSeries x = entry.kind == SeriesKind::current ? curl_to_flow(s) : s;
  if (!entry.nonevolutionary) return x.truncate(n);
  return neumann_invert(x, n);
}

EpsSeries apply_helmholtz(const EpsSeries& x, unsigned n) {
  EpsSeries::Components out;
  for (const auto& [k, p] : x.components()) {
    if (k <= n) out[k] += p;
    if (k + 2 <= n) out[k + 2] -= total_x_derivative(p, 2, kDefaultMaxJet);
  }
  return EpsSeries(x.kind(), std::min(n, x.truncation()), std::move(out));
}

EpsSeries rescale_current(const EpsSeries& omega, const Rational& lambda) {
  if (lambda == 0) throw Error("rescaling by zero");
  CoeffExpr lu = CoeffExpr::u().scaled(lambda);
  CoeffExpr inv(Rational(1) / lambda);
  return omega.map_components([&](const DiffPoly& p) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
      Rational factor(1);
      for (const auto& pw : m.powers()) {
        for (unsigned e = 0; e < pw.exp; ++e) factor *= lambda;
      }
      out.add_term(m, substitute_u(c, lu).scaled(factor) * inv);
    }
    return out;
  });
}

Rational normalizing_scale(const EpsSeries& omega) {
  CoeffExpr lead = omega.component(0).constant_part();
  CoeffExpr kappa = lead / (CoeffExpr::u() * CoeffExpr::u());
  if (!kappa.is_rational() || kappa.is_zero()) {
    throw Error("leading part '" + lead.to_string() + "' is not a multiple of u^2");
  }
  return Rational(1) / kappa.rational_value();
}

}  // namespace jetcalc
