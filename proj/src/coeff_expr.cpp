#include "jetcalc/coeff_expr.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace jetcalc {
namespace {

std::optional<Atom> last_related_constant(const Poly& p) {
  std::optional<Atom> best;
  for (const Term& t : p.terms()) {
    for (const Factor& f : t.mono.factors()) {
      Atom a = Atom::from_key(f.key);
      if (!a.is_constant() || !constant_relation(a)) continue;
      if (!best || a.symbol() > best->symbol()) best = a;
    }
  }
  return best;
}

Rational leading_coefficient(const Poly& p) { return p.canonical_leading().coeff; }

std::string rational_to_string(const Rational& q) { return q.get_str(); }

}  // namespace

CoeffExpr::CoeffExpr(const Poly& poly) : num_(poly.reduce_relations()), den_(1L) {}

CoeffExpr CoeffExpr::fraction(const Poly& num, const Poly& den) {
  CoeffExpr e(num, den, true);
  e.canonicalize();
  return e;
}

CoeffExpr CoeffExpr::atom(Atom atom) { return CoeffExpr(Poly::atom(atom), Poly(1L), true); }

void CoeffExpr::canonicalize() {
  if (den_.is_zero()) throw Error("division by zero");
  num_ = num_.reduce_relations();
  den_ = den_.reduce_relations();
  if (den_.is_zero()) throw Error("division by zero");
  // Rationalize: multiply through by the conjugate in the newest related constant.
  while (auto s = last_related_constant(den_)) {
    std::vector<Poly> parts = den_.coefficients_in(*s);
    Poly conj = parts[0] - parts[1] * Poly::atom(*s);
    num_ = (num_ * conj).reduce_relations();
    den_ = (den_ * conj).reduce_relations();
    if (den_.is_zero()) throw Error("division by zero");
  }
  if (num_.is_zero()) {
    den_ = Poly(1L);
    return;
  }
  if (den_.is_constant()) {
    num_ = num_.scaled(1 / den_.constant_term());
    den_ = Poly(1L);
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (!g.is_one()) {
    num_ = num_.divide_exact(g);
    den_ = den_.divide_exact(g);
  }
  Rational lc = leading_coefficient(den_);
  if (lc != 1) {
    Rational inv = 1 / lc;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

Rational CoeffExpr::rational_value() const {
  if (!is_rational()) throw Error("coefficient '" + to_string() + "' is not a rational number");
  return num_.constant_term();
}

std::vector<Atom> CoeffExpr::atoms() const {
  std::vector<Atom> a = num_.atoms();
  std::vector<Atom> b = den_.atoms();
  std::vector<Atom> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

CoeffExpr CoeffExpr::operator-() const { return CoeffExpr(-num_, den_, true); }

CoeffExpr operator+(const CoeffExpr& a, const CoeffExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_.is_one() && b.den_.is_one()) return CoeffExpr(a.num_ + b.num_, Poly(1L), true);
  if (b.den_.is_one()) return CoeffExpr(a.num_ + b.num_ * a.den_, a.den_, true);
  if (a.den_.is_one()) return CoeffExpr(b.num_ + a.num_ * b.den_, b.den_, true);
  if (a.den_ == b.den_) return CoeffExpr::fraction(a.num_ + b.num_, a.den_);
  return CoeffExpr::fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

CoeffExpr operator-(const CoeffExpr& a, const CoeffExpr& b) { return a + (-b); }

CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b) {
  if (a.is_zero() || b.is_zero()) return CoeffExpr{};
  if (a.is_rational()) return b.scaled(a.num_.constant_term());
  if (b.is_rational()) return a.scaled(b.num_.constant_term());
  if (a.den_.is_one() && b.den_.is_one()) {
    return CoeffExpr((a.num_ * b.num_).reduce_relations(), Poly(1L), true);
  }
  Poly g1 = b.den_.is_one() ? Poly(1L) : Poly::gcd(a.num_, b.den_);
  Poly g2 = a.den_.is_one() ? Poly(1L) : Poly::gcd(b.num_, a.den_);
  Poly an = g1.is_one() ? a.num_ : a.num_.divide_exact(g1);
  Poly bd = g1.is_one() ? b.den_ : b.den_.divide_exact(g1);
  Poly bn = g2.is_one() ? b.num_ : b.num_.divide_exact(g2);
  Poly ad = g2.is_one() ? a.den_ : a.den_.divide_exact(g2);
  Poly n = an * bn;
  Poly d = ad * bd;
  if (n.has_related_constants()) return CoeffExpr::fraction(n, d);
  Rational lc = leading_coefficient(d);
  if (lc != 1) {
    Rational inv = 1 / lc;
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  if (d.is_constant()) return CoeffExpr(n.scaled(1 / d.constant_term()), Poly(1L), true);
  return CoeffExpr(std::move(n), std::move(d), true);
}

CoeffExpr CoeffExpr::inverse() const {
  if (is_zero()) throw Error("division by zero");
  if (last_related_constant(num_)) return fraction(den_, num_);
  if (num_.is_constant()) return CoeffExpr(den_.scaled(1 / num_.constant_term()), Poly(1L), true);
  Rational lc = leading_coefficient(num_);
  Rational inv = 1 / lc;
  return CoeffExpr(den_.scaled(inv), num_.scaled(inv), true);
}

CoeffExpr operator/(const CoeffExpr& a, const CoeffExpr& b) {
  if (b.is_zero()) throw Error("division by zero");
  if (b.is_rational()) return a.scaled(1 / b.num_.constant_term());
  return a * b.inverse();
}

CoeffExpr CoeffExpr::scaled(const Rational& factor) const {
  if (factor == 0) return CoeffExpr{};
  return CoeffExpr(num_.scaled(factor), den_, true);
}

CoeffExpr CoeffExpr::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  CoeffExpr result(1L);
  CoeffExpr base = *this;
  auto e = static_cast<unsigned>(exponent);
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

bool CoeffExpr::cross_equal(const CoeffExpr& a, const CoeffExpr& b) {
  return (a.num_ * b.den_ - b.num_ * a.den_).reduce_relations().is_zero();
}

CoeffExpr CoeffExpr::d_u() const {
  if (den_.is_one()) return CoeffExpr(num_.du(), Poly(1L), true);
  return fraction(num_.du() * den_ - num_ * den_.du(), den_ * den_);
}

Rational CoeffExpr::eval_at(const std::map<Atom, Rational>& sigma) const {
  auto value_of = [&](Atom a) -> Rational {
    auto it = sigma.find(a);
    if (it == sigma.end()) throw Error("no value assigned to '" + a.to_string() + "'");
    return it->second;
  };
  for (Atom a : atoms()) {
    if (!a.is_constant()) continue;
    const auto& rel = constant_relation(a);
    if (!rel) continue;
    Rational rhs = rel->factor;
    for (const auto& [name, e] : rel->others) {
      Rational v = value_of(Atom::constant(name));
      for (unsigned i = 0; i < e; ++i) rhs *= v;
    }
    Rational s = value_of(a);
    if (s * s != rhs) throw Error("assignment violates the relation of '" + a.to_string() + "'");
  }
  std::function<Rational(const Rational&)> lift = [](const Rational& q) { return q; };
  Rational n = num_.evaluate<Rational>(value_of, lift);
  Rational d = den_.evaluate<Rational>(value_of, lift);
  if (d == 0) throw Error("denominator vanishes at the given assignment");
  return n / d;
}

CoeffExpr CoeffExpr::substitute(const std::map<Atom, CoeffExpr>& values) const {
  if (values.empty()) return *this;
  bool touched = false;
  for (Atom a : atoms()) touched = touched || values.count(a) > 0;
  if (!touched) return *this;
  auto value_of = [&](Atom a) -> CoeffExpr {
    auto it = values.find(a);
    return it == values.end() ? atom(a) : it->second;
  };
  std::function<CoeffExpr(const Rational&)> lift = [](const Rational& q) { return CoeffExpr(q); };
  return evaluate<CoeffExpr>(value_of, lift);
}

std::string poly_to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term* t : p.canonical_terms()) {
    Rational c = t->coeff;
    if (c < 0) {
      os << (first ? "-" : " - ");
      c = -c;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    if (t->mono.is_one()) {
      os << rational_to_string(c);
    } else if (c == 1) {
      os << monomial_to_string(t->mono);
    } else {
      os << rational_to_string(c) << '*' << monomial_to_string(t->mono);
    }
  }
  return os.str();
}

std::string CoeffExpr::to_string() const {
  if (den_.is_one()) return poly_to_string(num_);
  // Clear all rational coefficients with a common integer factor.
  Integer lcm = 1;
  Integer gcd = 0;
  for (const Poly* p : {&num_, &den_}) {
    for (const Term& t : p->terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  for (const Poly* p : {&num_, &den_}) {
    for (const Term& t : p->terms()) {
      Integer v = Rational(t.coeff * lcm).get_num();
      mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), v.get_mpz_t());
    }
  }
  Rational factor(lcm, gcd);
  factor.canonicalize();
  Poly n = num_.scaled(factor);
  Poly d = den_.scaled(factor);
  std::string ns = poly_to_string(n);
  std::string ds = poly_to_string(d);
  if (n.size() > 1) ns = "(" + ns + ")";
  bool bare_den = d.size() == 1 && d.terms()[0].coeff == 1 && d.terms()[0].mono.factors().size() == 1;
  if (!bare_den) ds = "(" + ds + ")";
  return ns + "/" + ds;
}

std::ostream& operator<<(std::ostream& os, const CoeffExpr& e) { return os << e.to_string(); }

}  // namespace jetcalc
