#include "doctest.h"
#include "jetcalc/jet.hpp"
#include "jetcalc/parse.hpp"
#include "oracle.hpp"

using namespace jetcalc;

namespace {

DiffPoly P(const char* text) { return parse_diffpoly(text); }

const std::vector<Atom>& coeff_atoms() {
  static const std::vector<Atom> atoms{Atom::identity(), Atom::function("a"), Atom::function("b1"),
                                       Atom::function("b1", 1)};
  return atoms;
}

}  // namespace

TEST_CASE("monomial basis follows the partition order") {
  CHECK(monomial_basis(2).size() == 2);
  CHECK(monomial_basis(4).size() == 5);
  CHECK(monomial_basis(6).size() == 11);
  CHECK(monomial_basis(8).size() == 22);
  CHECK(monomial_basis(10).size() == 42);
  CHECK(monomial_basis(12).size() == 77);
  auto b4 = monomial_basis(4);
  std::vector<std::string> names;
  for (const auto& m : b4) names.push_back(m.to_string());
  CHECK(names == std::vector<std::string>{"u4", "u1*u3", "u2^2", "u1^2*u2", "u1^4"});
  CHECK(monomial_basis(6).back().to_string() == "u1^6");
}

TEST_CASE("total x-derivative") {
  CHECK(total_x_derivative(P("f(u)")) == P("f'*u1"));
  CHECK(total_x_derivative(P("u2")) == P("u3"));
  CHECK(total_x_derivative(P("a*u1")) == P("a'*u1^2 + a*u2"));
  CHECK(total_x_derivative(P("u^2")) == P("2*u*u1"));
  CHECK_THROWS_AS(total_x_derivative(P("u3"), 3), Error);
}

TEST_CASE("partials") {
  CHECK(partial(P("u2^2"), 2) == P("2*u2"));
  CHECK(partial(P("a*u1"), 0) == P("a'*u1"));
  CHECK(partial(P("u1^3"), 2).is_zero());
}

TEST_CASE("euler operator") {
  CHECK(euler_operator(P("u1^2/2")) == P("-u2"));
  CHECK(euler_operator(P("u^3/6")) == P("u^2/2"));
  oracle::Rng rng(3);
  for (unsigned d = 0; d <= 7; ++d) {
    DiffPoly q = oracle::random_diffpoly(rng, coeff_atoms(), d, 4);
    CHECK(euler_operator(total_x_derivative(q)).is_zero());
  }
}

TEST_CASE("quasilinear part") {
  CHECK(quasilinear_part(P("u1*u2")).empty());
  auto q = quasilinear_part(P("b1*u2 + c*u1^2"));
  REQUIRE(q.size() == 1);
  CHECK(q.at(2) == parse_coeff("b1"));
}

TEST_CASE("grading and the commutation of partials with Dx") {
  oracle::Rng rng(5);
  for (int round = 0; round < 20; ++round) {
    unsigned d = static_cast<unsigned>(rng() % 7);
    DiffPoly p = oracle::random_diffpoly(rng, coeff_atoms(), d, 4);
    DiffPoly q = oracle::random_diffpoly(rng, coeff_atoms(), 2, 3);
    DiffPoly dp = total_x_derivative(p);
    if (!dp.is_zero()) CHECK(dp.homogeneous_degree() == d + 1);
    if (!(p * q).is_zero()) CHECK((p * q).homogeneous_degree() == d + 2);
    for (unsigned j = 1; j <= d + 1; ++j) {
      CHECK(partial(dp, j) == total_x_derivative(partial(p, j)) + partial(p, j - 1));
    }
  }
}

TEST_CASE("Dx and partials agree with the curve oracle") {
  oracle::Rng rng(17);
  oracle::Model model(99);
  for (int round = 0; round < 20; ++round) {
    DiffPoly p = oracle::random_diffpoly(rng, coeff_atoms(), static_cast<unsigned>(rng() % 6), 4);
    oracle::TSeries u = model.random_curve(20);
    oracle::TSeries lhs = model.along(total_x_derivative(p), u);
    oracle::TSeries rhs = model.along(p, u).derivative();
    CHECK(lhs.truncated(10) == rhs.truncated(10));
  }
}

TEST_CASE("printing and parsing round trip") {
  CHECK(P("u2 + u1^2 + u").to_string() == "u + u2 + u1^2");
  CHECK(P("-3*u*u1 + 1/2*b1*u1*u2").to_string() == "-3*u*u1 + 1/2*b1*u1*u2");
  CHECK(P("(a + b1)*u3").to_string() == "(a + b1)*u3");
  oracle::Rng rng(23);
  for (int round = 0; round < 30; ++round) {
    DiffPoly p = oracle::random_diffpoly(rng, coeff_atoms(), static_cast<unsigned>(rng() % 5), 5);
    CHECK(parse_diffpoly(p.to_string()) == p);
  }
  CoeffExpr c = parse_coeff("(117*b1''*b1^3 - 84*b1^2*b1'^2)/(144*b1^3)");
  CHECK(parse_coeff(c.to_string()) == c);
  CHECK(parse_coeff("f(u)") == parse_coeff("f"));
  CHECK(parse_coeff("f'(u)") == CoeffExpr::function("f", 1));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_diffpoly("u1 +\n  * u2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_diffpoly("u1 / u2"), ParseError);
  CHECK_THROWS_AS(parse_diffpoly("f(v)"), ParseError);
  CHECK_THROWS_AS(parse_diffpoly("u1'"), ParseError);
  CHECK_THROWS_AS(parse_diffpoly("eps*u1"), ParseError);
  CHECK_THROWS_AS(parse_coeff("u1"), ParseError);
  CHECK_THROWS_AS(parse_diffpoly("(u1"), ParseError);
  CHECK_THROWS_AS(parse_diffpoly("u1 $"), ParseError);
}

TEST_CASE("constant declarations") {
  Atom s = parse_constant_declaration("rt2^2 = 2");
  CHECK(parse_coeff("rt2*rt2") == CoeffExpr(2L));
  CHECK(s.is_constant());
  parse_constant_declaration("nu");
  parse_constant_declaration("rtnu^2 = 3*nu");
  CHECK(parse_coeff("rtnu^2") == parse_coeff("3*nu"));
  CHECK_THROWS_AS(parse_constant_declaration("w^2 = 2*f"), ParseError);
  CHECK_THROWS_AS(parse_constant_declaration("w^3 = 2"), ParseError);
}
