#include "jetcalc/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace jetcalc {

// ---- Monomial --------------------------------------------------------------

Monomial Monomial::of(Atom atom, std::uint32_t exp) {
  Monomial m;
  if (exp > 0) m.factors_.push_back(Factor{atom.key(), exp});
  return m;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const Factor& f : factors_) d += f.exp;
  return d;
}

std::uint32_t Monomial::degree_in(Atom atom) const {
  for (const Factor& f : factors_) {
    if (f.key == atom.key()) return f.exp;
  }
  return 0;
}

Monomial Monomial::without(Atom atom) const {
  Monomial m;
  for (const Factor& f : factors_) {
    if (f.key != atom.key()) m.factors_.push_back(f);
  }
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto& dst = out.factors_;
  dst.reserve(a.factors_.size() + b.factors_.size());
  auto ia = a.factors_.begin();
  auto ib = b.factors_.begin();
  while (ia != a.factors_.end() && ib != b.factors_.end()) {
    if (ia->key < ib->key) {
      dst.push_back(*ia++);
    } else if (ib->key < ia->key) {
      dst.push_back(*ib++);
    } else {
      dst.push_back(Factor{ia->key, ia->exp + ib->exp});
      ++ia;
      ++ib;
    }
  }
  dst.insert(dst.end(), ia, a.factors_.end());
  dst.insert(dst.end(), ib, b.factors_.end());
  return out;
}

bool Monomial::divides(const Monomial& other) const {
  auto io = other.factors_.begin();
  for (const Factor& f : factors_) {
    while (io != other.factors_.end() && io->key < f.key) ++io;
    if (io == other.factors_.end() || io->key != f.key || io->exp < f.exp) return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial out;
  auto id = divisor.factors_.begin();
  for (const Factor& f : factors_) {
    while (id != divisor.factors_.end() && id->key < f.key) ++id;
    if (id != divisor.factors_.end() && id->key == f.key) {
      if (id->exp > f.exp) throw Error("monomial quotient is not exact");
      if (f.exp > id->exp) out.factors_.push_back(Factor{f.key, f.exp - id->exp});
    } else {
      out.factors_.push_back(f);
    }
  }
  return out;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto ib = b.factors_.begin();
  for (const Factor& f : a.factors_) {
    while (ib != b.factors_.end() && ib->key < f.key) ++ib;
    if (ib != b.factors_.end() && ib->key == f.key) {
      out.factors_.push_back(Factor{f.key, std::min(f.exp, ib->exp)});
    }
  }
  return out;
}

namespace {

std::vector<Factor> canonically_sorted(const Monomial& m) {
  std::vector<Factor> v(m.factors().begin(), m.factors().end());
  std::sort(v.begin(), v.end(), [](const Factor& x, const Factor& y) {
    return canonical_less(Atom::from_key(x.key), Atom::from_key(y.key));
  });
  return v;
}

}  // namespace

int canonical_compare(const Monomial& a, const Monomial& b) {
  std::uint32_t da = a.total_degree();
  std::uint32_t db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  if (a == b) return 0;
  auto va = canonically_sorted(a);
  auto vb = canonically_sorted(b);
  std::size_t n = std::min(va.size(), vb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (va[i].key == vb[i].key) {
      if (va[i].exp != vb[i].exp) return va[i].exp < vb[i].exp ? -1 : 1;
      continue;
    }
    // The monomial holding the more significant atom is larger.
    return canonical_less(Atom::from_key(va[i].key), Atom::from_key(vb[i].key)) ? 1 : -1;
  }
  if (va.size() == vb.size()) return 0;
  return va.size() < vb.size() ? -1 : 1;
}

// ---- Poly ------------------------------------------------------------------

Poly::Poly(long value) {
  if (value != 0) terms_.push_back(Term{Monomial{}, Rational(value)});
}

Poly::Poly(const Rational& value) {
  if (value != 0) terms_.push_back(Term{Monomial{}, value});
}

Poly Poly::atom(Atom atom, std::uint32_t exp) {
  return term(Monomial::of(atom, exp), Rational(1));
}

Poly Poly::term(Monomial mono, Rational coeff) {
  Poly p;
  if (coeff != 0) p.terms_.push_back(Term{std::move(mono), std::move(coeff)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.mono < y.mono; });
  Poly p;
  p.terms_.reserve(terms.size());
  for (Term& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

bool Poly::is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff == 1; }

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_[0].mono.is_one()) return terms_[0].coeff;
  return Rational(0);
}

std::uint32_t Poly::degree_in(Atom atom) const {
  std::uint32_t d = 0;
  for (const Term& t : terms_) d = std::max(d, t.mono.degree_in(atom));
  return d;
}

bool Poly::contains(Atom atom) const {
  for (const Term& t : terms_) {
    if (t.mono.degree_in(atom) > 0) return true;
  }
  return false;
}

std::vector<Atom> Poly::atoms() const {
  std::vector<std::uint32_t> keys;
  for (const Term& t : terms_) {
    for (const Factor& f : t.mono.factors()) keys.push_back(f.key);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<Atom> out;
  out.reserve(keys.size());
  for (auto k : keys) out.push_back(Atom::from_key(k));
  return out;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (Term& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

namespace {

Poly merge(const Poly& a, const Poly& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->mono < ib->mono)) {
      out.push_back(*ia++);
    } else if (ia == a.terms().end() || ib->mono < ia->mono) {
      out.push_back(Term{ib->mono, subtract ? Rational(-ib->coeff) : ib->coeff});
      ++ib;
    } else {
      Rational c = subtract ? Rational(ia->coeff - ib->coeff) : Rational(ia->coeff + ib->coeff);
      if (c != 0) out.push_back(Term{ia->mono, std::move(c)});
      ++ia;
      ++ib;
    }
  }
  return Poly::from_terms(std::move(out));
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return merge(a, b, false);
}

Poly operator-(const Poly& a, const Poly& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return merge(a, b, true);
}

Poly& Poly::operator+=(const Poly& other) { return *this = *this + other; }
Poly& Poly::operator-=(const Poly& other) { return *this = *this - other; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly{};
  if (a.is_constant()) return b.scaled(a.terms()[0].coeff);
  if (b.is_constant()) return a.scaled(b.terms()[0].coeff);
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const Term& ta : a.terms()) {
    for (const Term& tb : b.terms()) out.push_back(Term{ta.mono * tb.mono, ta.coeff * tb.coeff});
  }
  return Poly::from_terms(std::move(out));
}

Poly Poly::scaled(const Rational& factor) const {
  if (factor == 0) return Poly{};
  Poly p = *this;
  for (Term& t : p.terms_) t.coeff *= factor;
  return p;
}

Poly Poly::times(const Monomial& mono) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) out.push_back(Term{t.mono * mono, t.coeff});
  return from_terms(std::move(out));
}

Poly Poly::pow(unsigned exponent) const {
  Poly result(1L);
  Poly base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

Poly Poly::partial(Atom atom) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    std::uint32_t e = t.mono.degree_in(atom);
    if (e == 0) continue;
    Monomial m = t.mono.without(atom) * Monomial::of(atom, e - 1);
    out.push_back(Term{std::move(m), t.coeff * e});
  }
  return from_terms(std::move(out));
}

Poly Poly::du() const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    for (const Factor& f : t.mono.factors()) {
      Atom a = Atom::from_key(f.key);
      if (a.is_constant()) continue;
      Monomial rest = t.mono.without(a) * Monomial::of(a, f.exp - 1);
      if (!a.is_identity()) rest = rest * Monomial::of(a.derivative());
      out.push_back(Term{std::move(rest), t.coeff * f.exp});
    }
  }
  return from_terms(std::move(out));
}

std::vector<Poly> Poly::coefficients_in(Atom atom) const {
  std::vector<std::vector<Term>> buckets(degree_in(atom) + 1);
  for (const Term& t : terms_) {
    std::uint32_t e = t.mono.degree_in(atom);
    buckets[e].push_back(Term{e ? t.mono.without(atom) : t.mono, t.coeff});
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Poly Poly::from_coefficients(Atom atom, const std::vector<Poly>& coefficients) {
  std::vector<Term> out;
  for (std::size_t e = 0; e < coefficients.size(); ++e) {
    Monomial xe = Monomial::of(atom, static_cast<std::uint32_t>(e));
    for (const Term& t : coefficients[e].terms()) out.push_back(Term{t.mono * xe, t.coeff});
  }
  return from_terms(std::move(out));
}

bool Poly::has_related_constants() const {
  for (const Term& t : terms_) {
    for (const Factor& f : t.mono.factors()) {
      Atom a = Atom::from_key(f.key);
      if (f.exp >= 2 && a.is_constant() && constant_relation(a)) return true;
    }
  }
  return false;
}

Poly Poly::reduce_relations() const {
  if (!has_related_constants()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    Term cur = t;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Factor& f : cur.mono.factors()) {
        Atom a = Atom::from_key(f.key);
        if (f.exp < 2 || !a.is_constant()) continue;
        const auto& rel = constant_relation(a);
        if (!rel) continue;
        std::uint32_t half = f.exp / 2;
        Monomial next = cur.mono.without(a) * Monomial::of(a, f.exp % 2);
        Rational c = cur.coeff;
        for (std::uint32_t i = 0; i < half; ++i) {
          c *= rel->factor;
          for (const auto& [name, e] : rel->others) next = next * Monomial::of(Atom::constant(name), e * 1);
        }
        cur = Term{std::move(next), std::move(c)};
        changed = true;
        break;
      }
    }
    out.push_back(std::move(cur));
  }
  return from_terms(std::move(out));
}

Rational Poly::content() const {
  if (terms_.empty()) return Rational(0);
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const Term& t : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(num_gcd, den_lcm);
  c.canonicalize();
  return c;
}

Poly Poly::primitive() const {
  if (terms_.empty()) return *this;
  Rational c = content();
  if (c == 1) return *this;
  Rational inv = 1 / c;
  return scaled(inv);
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return Monomial{};
  Monomial g = terms_[0].mono;
  for (std::size_t i = 1; i < terms_.size() && !g.is_one(); ++i) g = Monomial::gcd(g, terms_[i].mono);
  return g;
}

const Term& Poly::canonical_leading() const {
  if (terms_.empty()) throw Error("leading term of zero polynomial");
  const Term* best = &terms_[0];
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (canonical_compare(terms_[i].mono, best->mono) > 0) best = &terms_[i];
  }
  return *best;
}

std::vector<const Term*> Poly::canonical_terms() const {
  std::vector<const Term*> v;
  v.reserve(terms_.size());
  for (const Term& t : terms_) v.push_back(&t);
  std::sort(v.begin(), v.end(), [](const Term* x, const Term* y) { return canonical_compare(x->mono, y->mono) > 0; });
  return v;
}

Poly Poly::divide_monomial(const Monomial& mono) const {
  if (mono.is_one()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!mono.divides(t.mono)) throw Error("inexact monomial division");
    out.push_back(Term{t.mono.quotient(mono), t.coeff});
  }
  return from_terms(std::move(out));
}

Poly Poly::divide_exact(const Poly& divisor) const {
  if (divisor.is_zero()) throw Error("division by zero polynomial");
  if (is_zero()) return Poly{};
  if (divisor.is_constant()) return scaled(1 / divisor.terms_[0].coeff);
  if (divisor.is_single_term()) {
    return divide_monomial(divisor.terms_[0].mono).scaled(1 / divisor.terms_[0].coeff);
  }
  Atom x = Atom::from_key(divisor.terms_.back().mono.factors().back().key);
  std::vector<Poly> b = divisor.coefficients_in(x);
  std::vector<Poly> a = coefficients_in(x);
  std::size_t db = b.size() - 1;
  if (a.size() < b.size()) throw Error("inexact polynomial division");
  std::vector<Poly> q(a.size() - db);
  for (std::size_t d = a.size() - 1; d + 1 > db; --d) {
    if (a[d].is_zero()) continue;
    Poly qd = a[d].divide_exact(b[db]);
    for (std::size_t i = 0; i <= db; ++i) a[d - db + i] -= qd * b[i];
    q[d - db] = std::move(qd);
    if (d == db) break;
  }
  for (const Poly& r : a) {
    if (!r.is_zero()) throw Error("inexact polynomial division");
  }
  return from_coefficients(x, q);
}

namespace {

Poly normalize_gcd(const Poly& g) {
  if (g.is_zero()) return g;
  Poly p = g.primitive();
  if (p.canonical_leading().coeff < 0) p = -p;
  return p;
}

Poly gcd_rec(const Poly& a, const Poly& b);

Poly content_in(const Poly& p, Atom x, const Poly& seed) {
  Poly g = seed;
  for (const Poly& c : p.coefficients_in(x)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? normalize_gcd(c) : gcd_rec(g, c);
    if (g.is_constant()) return Poly(1L);
  }
  return g;
}

int degree_of(const std::vector<Poly>& v) {
  for (int d = static_cast<int>(v.size()) - 1; d >= 0; --d) {
    if (!v[static_cast<std::size_t>(d)].is_zero()) return d;
  }
  return -1;
}

std::vector<Poly> pseudo_remainder(std::vector<Poly> a, const std::vector<Poly>& b) {
  int db = degree_of(b);
  const Poly& lb = b[static_cast<std::size_t>(db)];
  int da = degree_of(a);
  while (da >= db) {
    Poly la = a[static_cast<std::size_t>(da)];
    int shift = da - db;
    for (int i = 0; i <= da; ++i) a[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] * lb;
    for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= la * b[static_cast<std::size_t>(i)];
    a.resize(static_cast<std::size_t>(da));
    da = degree_of(a);
    // Keep integer sizes in check.
    if (da >= 0) {
      Integer ng = 0;
      Integer dl = 1;
      for (int i = 0; i <= da; ++i) {
        for (const Term& t : a[static_cast<std::size_t>(i)].terms()) {
          mpz_gcd(ng.get_mpz_t(), ng.get_mpz_t(), t.coeff.get_num_mpz_t());
          mpz_lcm(dl.get_mpz_t(), dl.get_mpz_t(), t.coeff.get_den_mpz_t());
        }
      }
      if (ng != 0) {
        Rational inv(dl, ng);
        inv.canonicalize();
        for (int i = 0; i <= da; ++i) a[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)].scaled(inv);
      }
    }
  }
  return a;
}

Poly gcd_rec(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalize_gcd(b);
  if (b.is_zero()) return normalize_gcd(a);
  if (a.is_constant() || b.is_constant()) return Poly(1L);
  if (a.is_single_term() || b.is_single_term()) {
    Monomial m = Monomial::gcd(a.monomial_content(), b.monomial_content());
    return Poly::term(m, Rational(1));
  }
  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial mg = Monomial::gcd(ma, mb);
  Poly A = a.divide_monomial(ma);
  Poly B = b.divide_monomial(mb);

  std::vector<Atom> va = A.atoms();
  std::vector<Atom> vb = B.atoms();
  // An atom present in only one argument cannot occur in the gcd.
  for (Atom x : va) {
    if (!std::binary_search(vb.begin(), vb.end(), x)) {
      Poly g = content_in(A, x, normalize_gcd(B));
      return normalize_gcd(g.times(mg));
    }
  }
  for (Atom x : vb) {
    if (!std::binary_search(va.begin(), va.end(), x)) {
      Poly g = content_in(B, x, normalize_gcd(A));
      return normalize_gcd(g.times(mg));
    }
  }
  if (va.empty()) return Poly::term(mg, Rational(1));

  Atom x = va.back();
  Poly ca = content_in(A, x, Poly{});
  Poly cb = content_in(B, x, Poly{});
  Poly c = gcd_rec(ca, cb);
  std::vector<Poly> pa = A.divide_exact(ca).coefficients_in(x);
  std::vector<Poly> pb = B.divide_exact(cb).coefficients_in(x);
  if (degree_of(pa) < degree_of(pb)) std::swap(pa, pb);
  Poly g;
  while (true) {
    std::vector<Poly> r = pseudo_remainder(pa, pb);
    int dr = degree_of(r);
    if (dr < 0) {
      g = Poly::from_coefficients(x, pb);
      break;
    }
    if (dr == 0) {
      g = Poly(1L);
      break;
    }
    r.resize(static_cast<std::size_t>(dr + 1));
    Poly rp = Poly::from_coefficients(x, r);
    Poly rc = content_in(rp, x, Poly{});
    pa = std::move(pb);
    pb = rp.divide_exact(rc).coefficients_in(x);
  }
  if (!g.is_constant()) {
    Poly gc = content_in(g, x, Poly{});
    g = g.divide_exact(gc);
  }
  return normalize_gcd((g * c).times(mg));
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) { return gcd_rec(a, b); }

std::string monomial_to_string(const Monomial& mono) {
  auto v = canonically_sorted(mono);
  std::ostringstream os;
  bool first = true;
  for (const Factor& f : v) {
    if (!first) os << '*';
    first = false;
    os << Atom::from_key(f.key).to_string();
    if (f.exp != 1) os << '^' << f.exp;
  }
  return os.str();
}

}  // namespace jetcalc
