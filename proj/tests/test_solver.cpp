#include "doctest.h"
#include "jetcalc/parse.hpp"
#include "jetcalc/solver.hpp"
#include "oracle.hpp"

using namespace jetcalc;

namespace {

CoeffExpr fn(const char* name, unsigned k = 0) { return CoeffExpr::function(name, k); }

CoeffExpr rule_value(const Solution& s, const std::string& name) {
  const Rule* r = s.result.rules.find(name);
  REQUIRE(r != nullptr);
  CHECK(r->order == 0);
  return r->value;
}

CoeffExpr nth_du(CoeffExpr e, unsigned k) {
  for (unsigned i = 0; i < k; ++i) e = e.d_u();
  return e;
}

}  // namespace

TEST_CASE("ansatz and registry") {
  UnknownRegistry reg;
  EpsSeries s = build_ansatz(12, Branch::dispersive, false, fn("f"), &reg);
  CHECK(reg.count_at(2) == 2);
  CHECK(reg.count_at(4) == 5);
  CHECK(reg.count_at(6) == 11);
  CHECK(reg.count_at(8) == 22);
  CHECK(reg.count_at(10) == 42);
  CHECK(reg.count_at(12) == 77);
  CHECK(reg.count_at(3) == 0);
  CHECK(reg.entries()[7].name == "D1");
  CHECK(reg.entries().back().name == "G77");
  UnknownRegistry r2;
  EpsSeries s2 = build_ansatz(2, Branch::dispersive, false, fn("f"), &r2);
  CHECK(s2 == parse_series("f + eps^2*(B1*u2 + B2*u1^2)", 2).with_kind(SeriesKind::current));
  UnknownRegistry r4;
  EpsSeries s4 = build_ansatz(4, Branch::dispersive, false, fn("f"), &r4);
  CHECK(s4.component(4) == parse_diffpoly("C1*u4 + C2*u3*u1 + C3*u2^2 + C4*u2*u1^2 + C5*u1^4"));
  UnknownRegistry rv;
  build_ansatz(3, Branch::viscous, false, fn("f"), &rv);
  CHECK(rv.entries().front().name == "S1_1");
  CHECK(rv.count_at(3) == 3);
}

TEST_CASE("ranking") {
  UnknownRegistry reg;
  build_ansatz(4, Branch::dispersive, false, fn("f"), &reg);
  Atom b1 = Atom::function("B1"), b2 = Atom::function("B2"), c1 = Atom::function("C1");
  CHECK(reg.ranks_before(b2, c1));
  CHECK(reg.ranks_before(b1, b2));
  CHECK(reg.ranks_before(b2.with_order(1), b1));
  CHECK(reg.ranks_before(b1, b2.with_order(1), true));
  CHECK(reg.ranks_before(b2, b1, true));
}

TEST_CASE("rules rewrite derivatives") {
  RuleSet rules;
  rules.set("U", Rule{1, CoeffExpr::u() * fn("g")});
  CHECK(rules.apply(fn("U", 2)) == fn("g") + CoeffExpr::u() * fn("g", 1));
  CHECK(rules.apply(fn("U")) == fn("U"));
  rules.set("g", Rule{0, CoeffExpr::u()});
  CHECK(rules.find("U")->value == CoeffExpr::u() * CoeffExpr::u());
  CHECK(rules.apply(fn("U", 3)) == CoeffExpr(2L));
}

TEST_CASE("conditions at low orders") {
  UnknownRegistry reg;
  EpsSeries omega = normal_form_current(2, Branch::dispersive);
  EpsSeries sigma = build_ansatz(2, Branch::dispersive, false, fn("f"), &reg);
  CHECK(setup_conditions(omega, sigma, reg, 0, 0).equations.empty());
  LinearSystem sys = setup_conditions(omega, sigma, reg, 1, 2);
  CHECK(sys.equations.size() == 2);
  for (const auto& eq : sys.equations) CHECK(eq.order == 2);
  ElimResult r = eliminate(sys, reg, "f");
  CHECK(r.constraints.empty());
  CHECK(r.free_unknowns.empty());
  CHECK(r.rules.find("B1")->value == (fn("b1") * fn("f", 2)).scaled(Rational(1, 2)));
  CHECK(r.rules.find("B2")->value == (fn("b1") * fn("f", 3)).scaled(Rational(1, 4)));
  EpsSeries solved = r.rules.apply(sigma);
  CHECK(al_bracket(omega, solved, 2).is_zero());
}

TEST_CASE("eliminate records quadratures and consistency") {
  UnknownRegistry reg;
  reg.add("U", 2, JetMonomial::var(2));
  reg.add("V", 2, JetMonomial::var(1, 2));
  LinearSystem sys;
  Equation e1;
  e1.order = 2;
  e1.coeffs[Atom::function("U", 1)] = CoeffExpr(1L);
  e1.rhs = -fn("g");
  sys.equations.push_back(e1);
  Equation e2;
  e2.order = 2;
  e2.coeffs[Atom::function("V")] = CoeffExpr(1L);
  e2.coeffs[Atom::function("U", 2)] = CoeffExpr(-1L);
  sys.equations.push_back(e2);
  ElimResult r = eliminate(sys, reg, "f");
  REQUIRE(r.quadratures.size() == 1);
  CHECK(r.quadratures[0].name == "U");
  CHECK(r.rules.find("U")->order == 1);
  CHECK(r.rules.find("V")->value == fn("g", 1));
  CHECK(r.free_unknowns.empty());

  Equation e3;
  e3.order = 2;
  e3.coeffs[Atom::function("U")] = CoeffExpr(1L);
  e3.rhs = -CoeffExpr::u();
  sys.equations.push_back(e3);
  ElimResult r3 = eliminate(sys, reg, "f");
  CHECK(r3.rules.find("U")->order == 0);
  CHECK(r3.quadratures.empty());
  REQUIRE(r3.constraints.size() == 1);
  CHECK(r3.constraints[0].expr == CoeffExpr(Poly(fn("g").num() - Poly(1L))));
}

TEST_CASE("dispersive solve through eps^6 verifies") {
  SolverOptions o;
  o.order = 6;
  Solution s = solve(o);
  CHECK(s.check.is_zero());
  CHECK(s.result.constraints.empty());
  CHECK(s.result.free_unknowns.empty());
  CHECK(s.result.equation_counts.at(2) == 2);
  CHECK(s.result.equation_counts.at(4) == 6);
  CHECK(s.result.solved.size() == 2 + 5 + 11);
  for (const auto& name : s.result.solved) CHECK(name[0] != 'q');
  o.exec = Execution::serial;
  Solution t = solve(o);
  CHECK(t.sigma == s.sigma);
  CHECK(t.result.rules.rules().size() == s.result.rules.rules().size());
  for (const auto& [name, rule] : s.result.rules.rules()) CHECK(t.result.rules.find(name)->value == rule.value);
}

TEST_CASE("KdV and the symmetry produced by the solver commute") {
  SolverOptions o;
  o.order = 4;
  o.omega = parse_series("u^2 + eps^2*u2", 4).with_kind(SeriesKind::current);
  o.leading = CoeffExpr::u().pow(3);
  Solution s = solve(o);
  CHECK(s.check.is_zero());
  EpsSeries x = curl_to_flow(*o.omega);
  EpsSeries y = curl_to_flow(s.sigma);
  CHECK(y.component(4).max_jet() == 5);
  CHECK(evolutionary_commutator(x, y, 4).is_zero());
  CHECK(al_bracket(*o.omega, s.sigma, 4).is_zero());
}

TEST_CASE("viscous chain through eps^5") {
  SolverOptions o;
  o.order = 6;
  o.branch = Branch::viscous;
  Solution s = solve(o);
  CHECK(s.check.is_zero());
  CHECK(s.result.residual_constraints.empty());
  CoeffExpr a = fn("a");
  CHECK(rule_value(s, "b1") == nth_du(a.pow(2).scaled(Rational(1, 2)), 1));
  CHECK(rule_value(s, "c1") == nth_du(a.pow(3).scaled(Rational(1, 6)), 2));
  CHECK(rule_value(s, "d1") == nth_du(a.pow(4).scaled(Rational(1, 24)), 3));
  CHECK(rule_value(s, "e1") == nth_du(a.pow(5).scaled(Rational(1, 120)), 4));
}

TEST_CASE("odd orders vanish") {
  SolverOptions o;
  o.order = 7;
  o.allow_odd = true;
  Solution s = solve(o);
  CHECK(s.check.is_zero());
  for (const auto& e : s.registry.entries()) {
    if (e.order % 2 == 1 && e.order <= 5) CHECK(rule_value(s, e.name).is_zero());
  }
  for (const char* q : {"q3_1", "q5_1", "q5_2"}) CHECK(rule_value(s, q).is_zero());
}

TEST_CASE("inconsistent systems are reported") {
  SolverOptions o;
  o.order = 5;
  o.allow_odd = true;
  o.omega = parse_series("u^2 + eps^2*u2 + eps^3*u3", 5).with_kind(SeriesKind::current);
  try {
    solve(o);
    FAIL("expected a non-integrable report");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("non-integrable at order 5") != std::string::npos);
  }
  SolverOptions big;
  big.order = 10;
  CHECK_THROWS_AS(solve(big), Error);
}

TEST_CASE("a perturbed solution is caught at its own order") {
  SolverOptions o;
  o.order = 4;
  Solution s = solve(o);
  DiffPoly bump = DiffPoly::term(JetMonomial::var(2), CoeffExpr(1L));
  EpsSeries perturbed = s.sigma + EpsSeries(SeriesKind::current, 4, {{2, bump}});
  ResidualReport r = verify_solution(s.omega, perturbed, 4, s.result.rules);
  REQUIRE(r.first_nonzero_order());
  CHECK(*r.first_nonzero_order() == 2);
  // {u^2, u2} = 2u u3 - Dx^3(u^2) = -6 u1 u2.
  CHECK(r.at(2) == parse_diffpoly("-6*u1*u2"));
  // {b1 u2, u2} = b1' u2 u3 + b1 u5 - Dx^3(b1 u2).
  CHECK(r.at(4) == parse_diffpoly("-3*b1'*u1*u4 - 3*b1'*u2*u3 - 3*b1''*u1^2*u3 - 3*b1''*u1*u2^2 - b1'''*u1^3*u2"));
  CHECK(r.residual.size() == 2);
}
