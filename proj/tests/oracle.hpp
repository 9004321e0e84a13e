#pragma once
// Test-only evaluation oracle. Works from the raw numerator/denominator
// polynomials and prime-field arithmetic, never from canonical forms.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "jetcalc/coeff_expr.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/series.hpp"

namespace oracle {

using jetcalc::Atom;
using jetcalc::CoeffExpr;
using jetcalc::Rational;
using jetcalc::DiffPoly;
using jetcalc::EpsSeries;
using jetcalc::JetMonomial;
using Rng = std::mt19937_64;

/// Integers modulo the Mersenne prime 2^61 - 1.
struct Fp {
  static constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;
  std::uint64_t v = 0;

  Fp() = default;
  explicit Fp(std::uint64_t x) : v(x % P) {}
  static Fp from_signed(long long x) { return x >= 0 ? Fp(static_cast<std::uint64_t>(x)) : -Fp(static_cast<std::uint64_t>(-x)); }

  static std::uint64_t reduce(unsigned __int128 x) {
    std::uint64_t lo = static_cast<std::uint64_t>(x & P);
    std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
    std::uint64_t r = lo + hi;
    while (r >= P) r -= P;
    return r;
  }
  friend Fp operator+(Fp a, Fp b) {
    Fp r;
    r.v = a.v + b.v;
    if (r.v >= P) r.v -= P;
    return r;
  }
  friend Fp operator-(Fp a, Fp b) { return a + (-b); }
  Fp operator-() const {
    Fp r;
    r.v = v == 0 ? 0 : P - v;
    return r;
  }
  friend Fp operator*(Fp a, Fp b) {
    Fp r;
    r.v = reduce(static_cast<unsigned __int128>(a.v) * b.v);
    return r;
  }
  Fp pow(std::uint64_t e) const {
    Fp r(1), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
  Fp inverse() const {
    if (v == 0) throw jetcalc::Error("zero divisor in F_p");
    return pow(P - 2);
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
  friend bool operator==(Fp a, Fp b) { return a.v == b.v; }
  friend bool operator!=(Fp a, Fp b) { return a.v != b.v; }

  static Fp from_rational(const Rational& q) {
    mpz_class m(static_cast<unsigned long>(P >> 3));
    m = m * 8 + 7;
    mpz_class n = q.get_num() % m;
    if (n < 0) n += m;
    mpz_class d = q.get_den() % m;
    Fp fn(static_cast<std::uint64_t>(mpz_get_ui(n.get_mpz_t())));
    Fp fd(static_cast<std::uint64_t>(mpz_get_ui(d.get_mpz_t())));
    return fn / fd;
  }

  /// Square root by Tonelli-Shanks, if one exists.
  std::optional<Fp> sqrt() const {
    if (v == 0) return Fp(0);
    if (pow((P - 1) / 2) != Fp(1)) return std::nullopt;
    std::uint64_t q = P - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    Fp z(2);
    while (z.pow((P - 1) / 2) == Fp(1)) z = z + Fp(1);
    Fp c = z.pow(q), r = pow((q + 1) / 2), t = pow(q);
    unsigned m = s;
    while (t != Fp(1)) {
      unsigned i = 0;
      Fp tt = t;
      while (tt != Fp(1)) {
        tt = tt * tt;
        ++i;
      }
      Fp b = c;
      for (unsigned j = 0; j + i + 1 < m; ++j) b = b * b;
      r = r * b;
      c = b * b;
      t = t * c;
      m = i;
    }
    return r;
  }
};

inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_zero(const Fp& x) { return x.v == 0; }

template <typename T>
struct Dual {
  T value{};
  T deriv{};
  Dual() = default;
  explicit Dual(T v) : value(std::move(v)), deriv() {}
  Dual(T v, T d) : value(std::move(v)), deriv(std::move(d)) {}
  friend Dual operator+(const Dual& a, const Dual& b) { return {a.value + b.value, a.deriv + b.deriv}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.value - b.value, a.deriv - b.deriv}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.value * b.value, a.value * b.deriv + a.deriv * b.value}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    if (is_zero(b.value)) throw jetcalc::Error("dual division by zero");
    T q = a.value / b.value;
    return {q, (a.deriv - q * b.deriv) / b.value};
  }
  friend bool is_zero(const Dual& d) { return is_zero(d.value); }
};

inline Rational random_rational(Rng& rng, int range = 9) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, range);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Fp random_fp(Rng& rng) { return Fp(rng() % Fp::P); }

/// Random polynomial in the given atoms with small rational coefficients.
inline CoeffExpr random_poly(Rng& rng, const std::vector<Atom>& atoms, int max_terms) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::uniform_int_distribution<int> deg(0, 2);
  CoeffExpr out;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    CoeffExpr t(random_rational(rng));
    int d = deg(rng);
    for (int k = 0; k < d; ++k) t *= CoeffExpr::atom(atoms[pick(rng)]);
    out += t;
  }
  return out;
}

/// Random element of the coefficient field, sometimes a proper fraction.
inline CoeffExpr random_coeff(Rng& rng, const std::vector<Atom>& atoms, int max_terms) {
  CoeffExpr n = random_poly(rng, atoms, max_terms);
  if (rng() % 2 == 0) return n;
  CoeffExpr d = random_poly(rng, atoms, max_terms);
  if (d.is_zero()) return n;
  return n / d;
}

inline std::map<Atom, Rational> random_assignment(Rng& rng, const std::vector<Atom>& atoms) {
  std::map<Atom, Rational> sigma;
  for (Atom a : atoms) sigma[a] = random_rational(rng);
  return sigma;
}

/// Random F_p point respecting every declared constant relation among `atoms`.
/// Constants are assigned in declaration order so relation right-hand sides
/// are known before their square roots are taken.
inline std::map<Atom, Fp> random_fp_point(Rng& rng, std::vector<Atom> atoms) {
  std::vector<Atom> all = atoms;
  for (Atom a : atoms) {
    if (!a.is_constant()) continue;
    if (const auto& rel = jetcalc::constant_relation(a)) {
      for (const auto& [name, e] : rel->others) all.push_back(Atom::constant(name));
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::map<Atom, Fp> point;
    bool ok = true;
    for (Atom a : all) {
      const auto* rel = a.is_constant() && jetcalc::constant_relation(a) ? &*jetcalc::constant_relation(a) : nullptr;
      if (!rel) {
        point[a] = random_fp(rng);
        continue;
      }
      Fp rhs = Fp::from_rational(rel->factor);
      for (const auto& [name, e] : rel->others) rhs = rhs * point.at(Atom::constant(name)).pow(e);
      auto root = rhs.sqrt();
      if (!root) {
        ok = false;
        break;
      }
      point[a] = (rng() & 1) ? *root : -*root;
    }
    if (ok) return point;
  }
  throw jetcalc::Error("no F_p point satisfies the constant relations");
}

inline std::optional<Fp> eval_fp(const CoeffExpr& e, const std::map<Atom, Fp>& point) {
  auto value_of = [&](Atom a) { return point.at(a); };
  std::function<Fp(const Rational&)> lift = [](const Rational& q) { return Fp::from_rational(q); };
  Fp d = e.den().evaluate<Fp>(value_of, lift);
  if (d.v == 0) return std::nullopt;
  return e.num().evaluate<Fp>(value_of, lift) / d;
}

/// Polynomial identity test of a = b at `points` random F_p points.
inline bool identity_holds(const CoeffExpr& a, const CoeffExpr& b, int points, Rng& rng) {
  std::vector<Atom> atoms = a.atoms();
  for (Atom x : b.atoms()) atoms.push_back(x);
  int checked = 0;
  for (int i = 0; i < points * 2 && checked < points; ++i) {
    auto pt = random_fp_point(rng, atoms);
    auto va = eval_fp(a, pt);
    auto vb = eval_fp(b, pt);
    if (!va || !vb) continue;
    if (*va != *vb) return false;
    ++checked;
  }
  return checked == points;
}

/// Truncated power series in x over F_p; models a jet through a concrete curve.
struct TSeries {
  std::vector<Fp> c;
  TSeries() = default;
  explicit TSeries(std::size_t n, Fp constant = Fp()) : c(n) { if (n) c[0] = constant; }
  std::size_t size() const { return c.size(); }
  friend TSeries operator+(const TSeries& a, const TSeries& b) {
    TSeries r(std::min(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend TSeries operator-(const TSeries& a, const TSeries& b) {
    TSeries r(std::min(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend TSeries operator*(const TSeries& a, const TSeries& b) {
    TSeries r(std::min(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      Fp s;
      for (std::size_t k = 0; k <= i; ++k) s = s + a.c[k] * b.c[i - k];
      r.c[i] = s;
    }
    return r;
  }
  friend TSeries operator/(const TSeries& a, const TSeries& b) {
    std::size_t n = std::min(a.size(), b.size());
    if (b.c[0].v == 0) throw jetcalc::Error("series division by a non-unit");
    Fp inv = b.c[0].inverse();
    TSeries q(n);
    for (std::size_t i = 0; i < n; ++i) {
      Fp s = a.c[i];
      for (std::size_t k = 1; k <= i; ++k) s = s - b.c[k] * q.c[i - k];
      q.c[i] = s * inv;
    }
    return q;
  }
  TSeries derivative() const {
    TSeries r(size() ? size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < size(); ++i) r.c[i] = c[i + 1] * Fp(i + 1);
    return r;
  }
  bool operator==(const TSeries& o) const { return c == o.c; }
  TSeries truncated(std::size_t n) const {
    TSeries r = *this;
    r.c.resize(std::min(n, size()));
    return r;
  }
};
inline bool is_zero(const TSeries& s) { return s.size() == 0 || s.c[0].v == 0; }

/// Concrete random instantiation of every function symbol (a polynomial in u)
/// and constant, over F_p.
class Model {
 public:
  explicit Model(std::uint64_t seed, unsigned degree = 7) : rng_(seed), degree_(degree) {}

  template <typename T>
  T function(const std::string& name, unsigned order, const T& u, const std::function<T(Fp)>& lift) {
    auto& coeffs = poly(name);
    // Derivative of order `order` by Horner on the differentiated coefficients.
    T acc = lift(Fp());
    for (std::size_t i = coeffs.size(); i-- > order;) {
      Fp factor(1);
      for (unsigned k = 0; k < order; ++k) factor = factor * Fp(i - k);
      acc = acc * u + lift(coeffs[i] * factor);
    }
    return acc;
  }

  Fp constant(Atom a) {
    auto it = constants_.find(a);
    if (it != constants_.end()) return it->second;
    const auto& rel = jetcalc::constant_relation(a);
    if (!rel) return constants_[a] = random_fp(rng_);
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::map<Atom, Fp> fresh;
      Fp rhs = Fp::from_rational(rel->factor);
      for (const auto& [name, e] : rel->others) {
        Atom b = Atom::constant(name);
        Fp v = constants_.count(b) ? constants_.at(b) : (fresh.count(b) ? fresh.at(b) : constant_candidate(b, fresh));
        rhs = rhs * v.pow(e);
      }
      if (auto root = rhs.sqrt()) {
        for (auto& [k, v] : fresh) constants_.emplace(k, v);
        return constants_[a] = (rng_() & 1) ? *root : -*root;
      }
    }
    throw jetcalc::Error("cannot satisfy the relation of '" + a.to_string() + "' over F_p");
  }

  void set_polynomial(const std::string& name, std::vector<Fp> coeffs) { polys_[name] = std::move(coeffs); }
  Rng& rng() { return rng_; }

  template <typename T>
  T coeff(const CoeffExpr& e, const T& u, const std::function<T(Fp)>& lift) {
    // Related constants first, so their dependencies stay free to choose.
    for (Atom a : e.atoms()) {
      if (a.is_constant() && jetcalc::constant_relation(a)) constant(a);
    }
    auto value_of = [&](Atom a) -> T {
      if (a.is_identity()) return u;
      if (a.is_constant()) return lift(constant(a));
      return function<T>(a.name(), a.order(), u, lift);
    };
    std::function<T(const Rational&)> lr = [&](const Rational& q) { return lift(Fp::from_rational(q)); };
    T n = e.num().evaluate<T>(value_of, lr);
    if (e.den().is_one()) return n;
    return n / e.den().evaluate<T>(value_of, lr);
  }

  /// Value of P along the curve whose jets are x-derivatives of `u`.
  TSeries along(const DiffPoly& p, const TSeries& u) {
    std::vector<TSeries> jets{u};
    std::function<TSeries(Fp)> lift = [&](Fp c) { return TSeries(u.size(), c); };
    TSeries total(u.size());
    for (const auto& [m, c] : p.terms()) {
      while (jets.size() <= m.max_jet()) jets.push_back(jets.back().derivative());
      TSeries t = coeff<TSeries>(c, u, lift);
      for (const auto& pw : m.powers()) {
        for (unsigned e = 0; e < pw.exp; ++e) t = t * jets[pw.jet];
      }
      total = total + t;
    }
    return total;
  }

  TSeries random_curve(std::size_t length) {
    TSeries u(length);
    for (auto& x : u.c) x = random_fp(rng_);
    return u;
  }

 private:
  std::vector<Fp>& poly(const std::string& name) {
    auto it = polys_.find(name);
    if (it != polys_.end()) return it->second;
    std::vector<Fp> c(degree_ + 1);
    for (auto& x : c) x = random_fp(rng_);
    return polys_[name] = c;
  }

  Fp constant_candidate(Atom b, std::map<Atom, Fp>& fresh) {
    // Unassigned dependencies are drawn together with the constant using them.
    if (jetcalc::constant_relation(b)) {
      Fp v = constant(b);
      return v;
    }
    return fresh[b] = random_fp(rng_);
  }

  Rng rng_;
  unsigned degree_;
  std::map<std::string, std::vector<Fp>> polys_;
  std::map<Atom, Fp> constants_;
};

/// Random homogeneous differential polynomial of the given degree.
inline DiffPoly random_diffpoly(Rng& rng, const std::vector<Atom>& atoms, unsigned degree, int max_terms) {
  auto basis = jetcalc::monomial_basis(degree);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  DiffPoly out;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) out.add_term(basis[pick(rng)], random_poly(rng, atoms, 2));
  return out;
}

}  // namespace oracle
