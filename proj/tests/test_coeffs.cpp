#include <random>

#include "doctest.h"
#include "jetcalc/coeff_expr.hpp"
#include "oracle.hpp"

using namespace jetcalc;

namespace {

CoeffExpr f(const char* name, unsigned k = 0) { return CoeffExpr::function(name, k); }

}  // namespace

TEST_CASE("d_u follows Leibniz and the quotient rule") {
  CoeffExpr a = f("a");
  CHECK((a * a).d_u() == a * f("a", 1) * 2);
  CHECK(CoeffExpr(1L).d_u().is_zero());
  CoeffExpr b1 = f("b1"), c1 = f("c1");
  CHECK((c1 / b1).d_u() == (f("c1", 1) * b1 - c1 * f("b1", 1)) / (b1 * b1));
  CHECK(CoeffExpr::u().d_u() == CoeffExpr(1L));
  CHECK((CoeffExpr::u() * CoeffExpr::u()).d_u() == CoeffExpr::u() * 2);
}

TEST_CASE("arithmetic reduces to canonical form") {
  declare_constant("sqrt2", ConstRelation{Rational(2), {}});
  CoeffExpr s = CoeffExpr::constant("sqrt2");
  CHECK(s * s == CoeffExpr(2L));
  CHECK((s * s * s) == s * 2);
  CHECK((CoeffExpr(1L) / s) == s / 2);
  CoeffExpr a = f("a"), b1 = f("b1");
  CHECK(a / b1 + a / b1 == (a * 2) / b1);
  CHECK((b1 * b1) * (CoeffExpr(1L) / b1) == b1);
  CHECK(((a * a - b1 * b1) / (a + b1)) == a - b1);
  CHECK_THROWS_AS(a / CoeffExpr(0L), Error);
  CHECK_THROWS_AS(a / (b1 - b1), Error);
}

TEST_CASE("relations chain through earlier constants") {
  declare_constant("alpha");
  declare_constant("s2a", ConstRelation{Rational(2), {{"alpha", 1}}});
  CoeffExpr s = CoeffExpr::constant("s2a");
  CoeffExpr al = CoeffExpr::constant("alpha");
  CHECK(s * s == al * 2);
  CHECK(CoeffExpr(1L) / (CoeffExpr(1L) + s) == (CoeffExpr(1L) - s) / (CoeffExpr(1L) - al * 2));
  CHECK_THROWS_AS(declare_constant("bad", ConstRelation{Rational(1), {{"nope", 1}}}), Error);
  CHECK_THROWS_AS(declare_constant("s2a", ConstRelation{Rational(3), {}}), Error);
}

TEST_CASE("gcd reduction of multivariate fractions") {
  CoeffExpr x = f("x"), y = f("y"), z = f("z");
  CoeffExpr g = x * y + z * z - 3;
  CoeffExpr p = (x + y * y) * g;
  CoeffExpr q = (x * z - y) * g;
  CoeffExpr r = p / q;
  CHECK(r.num() == (x + y * y).num().scaled(r.num().canonical_leading().coeff /
                                           (x + y * y).num().canonical_leading().coeff));
  CHECK(r == (x + y * y) / (x * z - y));
  CHECK(CoeffExpr::cross_equal(r, (x + y * y) / (x * z - y)));
  CoeffExpr t = (x.pow(3) - y.pow(3)) / (x * x - y * y);
  CHECK(t == (x * x + x * y + y * y) / (x + y));
}

TEST_CASE("eval_at") {
  CoeffExpr e = f("a") * f("a", 1);
  std::map<Atom, Rational> sigma{{Atom::function("a"), Rational(3)}, {Atom::function("a", 1), Rational(5)}};
  CHECK(e.eval_at(sigma) == 15);
  CHECK(CoeffExpr(0L).eval_at({}) == 0);
  CHECK_THROWS_AS(f("b").eval_at(sigma), Error);
  CoeffExpr inv = CoeffExpr(1L) / (f("a") - 3);
  CHECK_THROWS_AS(inv.eval_at(sigma), Error);
  declare_constant("sqrt2", ConstRelation{Rational(2), {}});
  std::map<Atom, Rational> bad{{Atom::constant("sqrt2"), Rational(1)}};
  CHECK_THROWS_AS(CoeffExpr::constant("sqrt2").eval_at(bad), Error);
}

TEST_CASE("random expressions: homomorphism, idempotence and identity testing") {
  oracle::Rng rng(7);
  std::vector<Atom> atoms{Atom::function("a"), Atom::function("a", 1), Atom::function("b1"),
                          Atom::function("b1", 2), Atom::identity()};
  for (int round = 0; round < 30; ++round) {
    CoeffExpr x = oracle::random_coeff(rng, atoms, 3);
    CoeffExpr y = oracle::random_coeff(rng, atoms, 3);
    if (y.is_zero()) continue;
    CoeffExpr z = x / y;
    CHECK(CoeffExpr::fraction(z.num(), z.den()) == z);
    CHECK((x * y).d_u() == x * y.d_u() + x.d_u() * y);
    CHECK(z * y == x);
    CHECK(oracle::identity_holds(z * y + x, x * 2, 1000, rng));
    for (int k = 0; k < 5; ++k) {
      auto sigma = oracle::random_assignment(rng, atoms);
      Rational xx, yx;
      try {
        xx = x.eval_at(sigma);
        yx = y.eval_at(sigma);
        (void)(x * y).eval_at(sigma);
      } catch (const Error&) {
        continue;
      }
      if (yx == 0) continue;
      CHECK((x + y).eval_at(sigma) == xx + yx);
      CHECK((x * y).eval_at(sigma) == xx * yx);
      CHECK(z.eval_at(sigma) == xx / yx);
    }
  }
}

TEST_CASE("d_u agrees with dual-number differentiation for concrete functions") {
  // a(u) = u^3 + 2u and b1(u) = 1/(u^2 + 1); every derivative symbol is instantiated.
  using D = oracle::Dual<Rational>;
  using DD = oracle::Dual<D>;
  oracle::Rng rng(11);
  std::vector<Atom> atoms{Atom::function("a"), Atom::function("a", 1), Atom::function("b1"),
                          Atom::function("b1", 1), Atom::identity()};
  for (int round = 0; round < 20; ++round) {
    CoeffExpr e = oracle::random_coeff(rng, atoms, 3);
    Rational u0 = oracle::random_rational(rng);
    // Second-order jets of a and b1 at u0 from nested duals.
    DD uu(D(u0, Rational(1)), D(Rational(1)));
    DD a = uu * uu * uu + uu * DD(D(Rational(2)));
    DD b = DD(D(Rational(1))) / (uu * uu + DD(D(Rational(1))));
    auto value = [&](Atom at) -> D {
      if (at.is_identity()) return uu.value;
      const DD& r = at.name() == "a" ? a : b;
      return at.order() == 0 ? r.value : r.deriv;
    };
    std::function<D(const Rational&)> lift = [](const Rational& q) { return D(q); };
    D full;
    try {
      full = e.evaluate<D>(value, lift);
    } catch (const Error&) {
      continue;
    }
    std::map<Atom, Rational> sigma{{Atom::identity(), u0},
                                   {Atom::function("a"), a.value.value},
                                   {Atom::function("a", 1), a.deriv.value},
                                   {Atom::function("a", 2), a.deriv.deriv},
                                   {Atom::function("b1"), b.value.value},
                                   {Atom::function("b1", 1), b.deriv.value},
                                   {Atom::function("b1", 2), b.deriv.deriv}};
    CHECK(e.d_u().eval_at(sigma) == full.deriv);
  }
}

TEST_CASE("printing") {
  CoeffExpr b1 = f("b1");
  CoeffExpr e = (b1.pow(3) * f("b1", 2) * 117 - f("c1").pow(2) * 800) / (b1 * b1 * 144);
  CHECK(e.to_string() == "(117*b1^3*b1'' - 800*c1^2)/(144*b1^2)");
  CHECK((b1 * f("f", 2) / 2).to_string() == "1/2*b1*f''");
  CHECK((f("a") / b1).to_string() == "a/b1");
  CHECK((-f("a") / (b1 * 2)).to_string() == "-a/(2*b1)");
  CHECK(CoeffExpr(0L).to_string() == "0");
}
