#include "doctest.h"
#include "jetcalc/normalform.hpp"
#include "jetcalc/parse.hpp"
#include "oracle.hpp"

using namespace jetcalc;

namespace {

EpsSeries current(const char* text, unsigned n) { return parse_series(text, n).with_kind(SeriesKind::current); }

CoeffExpr fn(const char* name, unsigned k = 0) { return CoeffExpr::function(name, k); }

/// Sets every derivative of `name` to zero.
CoeffExpr freeze(const CoeffExpr& e, const char* name) {
  std::map<Atom, CoeffExpr> zero;
  for (Atom a : e.atoms()) {
    if (a.is_function() && a.name() == name && a.order() > 0) zero[a] = CoeffExpr();
  }
  return e.substitute(zero);
}

void check_reduction(const EpsSeries& omega, const NormalForm& nf, unsigned n) {
  EpsSeries flow = curl_to_flow(omega);
  EpsSeries moved = pushforward(nf.reducing_map, flow, n);
  CHECK(moved == curl_to_flow(nf.current));
  CHECK(quasilinear_profile(moved) == quasilinear_profile(flow));
  for (unsigned k = 2; k <= n; ++k) {
    DiffPoly wk = nf.current.component(k);
    for (const auto& [m, c] : wk.terms()) CHECK(m.exponent(1) == 0);
  }
}

}  // namespace

TEST_CASE("normal bases and letter names") {
  CHECK(normal_basis(4).size() == 2);
  CHECK(normal_basis(6).size() == 4);
  CHECK(normal_basis(8).size() == 7);
  CHECK(normal_basis(8)[2].to_string() == "u3*u5");
  CHECK(letter_name(4, 2, Branch::dispersive) == "c2");
  CHECK(letter_name(8, 7, Branch::dispersive) == "e7");
  CHECK(letter_name(5, 1, Branch::dispersive) == "q5_1");
  CHECK(letter_name(1, 1, Branch::viscous) == "a");
  CHECK(letter_name(4, 2, Branch::viscous) == "d2");
  CHECK(capital_name(6, 11, Branch::dispersive) == "D11");
  CHECK(capital_name(3, 2, Branch::viscous) == "S3_2");
  EpsSeries w = normal_form_current(8, Branch::dispersive);
  CHECK(w.component(4) == parse_diffpoly("c1*u4 + c2*u2^2"));
  CHECK(w.component(8).size() == 7);
  CHECK(normal_form_current(5, Branch::viscous).component(5) == parse_diffpoly("e1*u5 + e2*u3*u2"));
}

TEST_CASE("normal currents are left alone") {
  EpsSeries w = current("u^2 + eps^2*b1*u2 + eps^4*(c1*u4 + c2*u2^2)", 4);
  NormalForm nf = to_normal_form(w, 4);
  CHECK(nf.current == w);
  CHECK(nf.reducing_map == MiuraMap::identity(4));
}

TEST_CASE("a u_x^2 term is absorbed at eps^2") {
  EpsSeries w = current("u^2 + eps^2*B*u1^2", 6);
  NormalForm nf = to_normal_form(w, 6);
  CHECK(nf.current.component(2).is_zero());
  CHECK(nf.reducing_map.corrections().component(2) == parse_diffpoly("-1/2*(B*u2 + B'*u1^2)"));
  check_reduction(w, nf, 6);
  NormalForm again = to_normal_form(nf.current, 6);
  CHECK(again.reducing_map == MiuraMap::identity(6));
  CHECK(again.current == nf.current);
}

TEST_CASE("random currents reduce and the reduction is idempotent") {
  oracle::Rng rng(5);
  std::vector<Atom> atoms{Atom::identity(), Atom::function("p")};
  for (int round = 0; round < 4; ++round) {
    EpsSeries::Components c;
    c[0] = DiffPoly(CoeffExpr::u() * CoeffExpr::u());
    for (unsigned k = 1; k <= 4; ++k) c[k] = oracle::random_diffpoly(rng, atoms, k, 3);
    EpsSeries w(SeriesKind::current, 4, c);
    NormalForm nf = to_normal_form(w, 4);
    check_reduction(w, nf, 4);
    CHECK(to_normal_form(nf.current, 4).reducing_map == MiuraMap::identity(4));
  }
}

TEST_CASE("symbolic leading term") {
  EpsSeries w = current("g + eps^2*(u2 + h*u1^2)", 4);
  NormalForm nf = to_normal_form(w, 4);
  check_reduction(w, nf, 4);
  CHECK_THROWS_AS(to_normal_form(current("3 + eps^2*u1^2", 2), 2), Error);
}

TEST_CASE("Hamiltonian family reduces to the stated normal form") {
  CoeffExpr c = fn("c"), p = fn("p");
  EpsSeries ham = hamiltonian_current(c, p);
  NormalForm nf = to_normal_form(ham, 4);
  CHECK(nf.current == hamiltonian_normal_current(c, p));
  CHECK(nf.reducing_map == hamiltonian_map(c, p));
  EpsSeries moved = pushforward(hamiltonian_map(c, p), curl_to_flow(ham), 4);
  CHECK(moved == curl_to_flow(hamiltonian_normal_current(c, p)));
  auto letters = central_invariants(nf);
  REQUIRE(letters.size() == 3);
  CHECK(letters[0].name == "b1");
  CHECK(letters[0].value == c.scaled(Rational(1, 12)));
  CHECK(letters[1].value == p.scaled(2));
  CHECK(letters[2].name == "c2");
  CHECK_FALSE(letters[2].quasilinear());
}

TEST_CASE("central invariants of constant examples") {
  NormalForm kdv = to_normal_form(current("u^2 + eps^2*u2", 4), 4);
  auto l = central_invariants(kdv);
  REQUIRE(l.size() == 1);
  CHECK(l[0].name == "b1");
  CHECK(l[0].value == CoeffExpr(1L));
  EpsSeries hodge = current("u^2 + eps^2*1/12*u2 + eps^4*1/120*u4 + eps^6*1/252*u6", 6);
  auto h = central_invariants(to_normal_form(hodge, 6));
  REQUIRE(h.size() == 7);
  CHECK(h[0].value == CoeffExpr(Rational(1, 12)));
  CHECK(h[1].name == "c1");
  CHECK(h[1].value == CoeffExpr(Rational(1, 120)));
  CHECK(h[2].value.is_zero());
  CHECK(h[3].name == "d1");
  CHECK(h[3].value == CoeffExpr(Rational(1, 252)));
}

TEST_CASE("SK and KK share the quasilinear part") {
  EpsSeries sk = current("5/3*u^3 + eps^2*5*u*u2 + eps^4*u4", 4);
  EpsSeries kk = current("5/3*u^3 + eps^2*(5*u*u2 + 15/4*u1^2) + eps^4*u4", 4);
  CHECK(quasilinear_profile(sk) == quasilinear_profile(kk));
  CHECK(quasilinear_profile(curl_to_flow(sk)) == quasilinear_profile(curl_to_flow(kk)));
  NormalForm a = to_normal_form(sk, 4), b = to_normal_form(kk, 4);
  check_reduction(sk, a, 4);
  check_reduction(kk, b, 4);
  CHECK(quasilinear_profile(a.current) == quasilinear_profile(b.current));
}

TEST_CASE("transcribed c2 relation") {
  CHECK(transcribed_c2(CoeffExpr(3L), CoeffExpr(), CoeffExpr()).is_zero());
  CHECK_THROWS_AS(transcribed_c2(CoeffExpr(), fn("c1"), fn("d1")), Error);
  CoeffExpr c = fn("c"), p = fn("p"), d1 = fn("d1");
  // Constant c: c2 = 0 forces 560 b1 d1 = 330 b1^2 c1' + 800 c1^2.
  CoeffExpr c2 = freeze(transcribed_c2(c.scaled(Rational(1, 12)), p.scaled(2), d1), "c");
  CoeffExpr solved = freeze(parse_coeff("480*p^2/(7*c) + 11*c*p'/112"), "c");
  CHECK(freeze(c2.substitute({{Atom::function("d1"), solved}}), "c").is_zero());
  oracle::Rng rng(9);
  CoeffExpr b1 = fn("b1"), c1 = fn("c1");
  CoeffExpr direct = (CoeffExpr(117L) * b1.pow(3) * fn("b1", 2) - CoeffExpr(84L) * b1 * b1 * fn("b1", 1).pow(2) +
                      CoeffExpr(670L) * fn("b1", 1) * c1 - CoeffExpr(330L) * b1 * b1 * fn("c1", 1) +
                      CoeffExpr(560L) * b1 * d1 - CoeffExpr(800L) * c1 * c1) /
                     (CoeffExpr(144L) * b1 * b1);
  CHECK(oracle::identity_holds(transcribed_c2(b1, c1, d1), direct, 50, rng));
}
