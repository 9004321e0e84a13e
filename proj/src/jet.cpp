#include "jetcalc/jet.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace jetcalc {

// ---- JetMonomial -----------------------------------------------------------

JetMonomial JetMonomial::var(unsigned j, unsigned exp) {
  if (j == 0) throw Error("jet variables start at u1");
  JetMonomial m;
  if (exp > 0) m.powers_.push_back(Power{static_cast<std::uint16_t>(j), static_cast<std::uint16_t>(exp)});
  return m;
}

JetMonomial JetMonomial::from_parts(const std::vector<unsigned>& parts) {
  JetMonomial m;
  for (unsigned p : parts) m = m * var(p);
  return m;
}

unsigned JetMonomial::degree() const {
  unsigned d = 0;
  for (const Power& p : powers_) d += unsigned(p.jet) * p.exp;
  return d;
}

unsigned JetMonomial::exponent(unsigned j) const {
  for (const Power& p : powers_) {
    if (p.jet == j) return p.exp;
  }
  return 0;
}

std::vector<unsigned> JetMonomial::parts() const {
  std::vector<unsigned> out;
  for (const Power& p : powers_) out.insert(out.end(), p.exp, p.jet);
  return out;
}

JetMonomial operator*(const JetMonomial& a, const JetMonomial& b) {
  JetMonomial out;
  auto ia = a.powers_.begin();
  auto ib = b.powers_.begin();
  while (ia != a.powers_.end() && ib != b.powers_.end()) {
    if (ia->jet > ib->jet) {
      out.powers_.push_back(*ia++);
    } else if (ib->jet > ia->jet) {
      out.powers_.push_back(*ib++);
    } else {
      out.powers_.push_back(JetMonomial::Power{ia->jet, static_cast<std::uint16_t>(ia->exp + ib->exp)});
      ++ia;
      ++ib;
    }
  }
  out.powers_.insert(out.powers_.end(), ia, a.powers_.end());
  out.powers_.insert(out.powers_.end(), ib, b.powers_.end());
  return out;
}

JetMonomial JetMonomial::lowered(unsigned j) const {
  JetMonomial out = *this;
  for (auto it = out.powers_.begin(); it != out.powers_.end(); ++it) {
    if (it->jet != j) continue;
    if (--it->exp == 0) out.powers_.erase(it);
    return out;
  }
  throw Error("jet variable u" + std::to_string(j) + " absent from monomial");
}

std::string JetMonomial::to_string() const {
  if (powers_.empty()) return "1";
  std::string out;
  for (auto it = powers_.rbegin(); it != powers_.rend(); ++it) {
    if (!out.empty()) out += '*';
    out += 'u' + std::to_string(it->jet);
    if (it->exp != 1) out += '^' + std::to_string(it->exp);
  }
  return out;
}

bool JetOrder::operator()(const JetMonomial& a, const JetMonomial& b) const {
  unsigned da = a.degree();
  unsigned db = b.degree();
  if (da != db) return da < db;
  const auto& pa = a.powers();
  const auto& pb = b.powers();
  std::size_t n = std::min(pa.size(), pb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (pa[i].jet != pb[i].jet) return pa[i].jet > pb[i].jet;
    if (pa[i].exp != pb[i].exp) return pa[i].exp > pb[i].exp;
  }
  return pa.size() < pb.size();
}

namespace {

void partitions(unsigned n, unsigned largest, std::vector<unsigned>& prefix, std::vector<JetMonomial>& out) {
  if (n == 0) {
    out.push_back(JetMonomial::from_parts(prefix));
    return;
  }
  for (unsigned first = std::min(n, largest); first >= 1; --first) {
    prefix.push_back(first);
    partitions(n - first, first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<JetMonomial> monomial_basis(unsigned degree) {
  std::vector<JetMonomial> out;
  std::vector<unsigned> prefix;
  partitions(degree, degree, prefix, out);
  return out;
}

// ---- DiffPoly --------------------------------------------------------------

DiffPoly::DiffPoly(const CoeffExpr& c) {
  if (!c.is_zero()) terms_.emplace(JetMonomial{}, c);
}

DiffPoly DiffPoly::term(const JetMonomial& m, const CoeffExpr& c) {
  DiffPoly p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

DiffPoly DiffPoly::jet(unsigned j) {
  if (j == 0) return DiffPoly(CoeffExpr::u());
  return term(JetMonomial::var(j), CoeffExpr(1L));
}

CoeffExpr DiffPoly::coefficient(const JetMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? CoeffExpr{} : it->second;
}

unsigned DiffPoly::max_jet() const {
  unsigned j = 0;
  for (const auto& [m, c] : terms_) j = std::max(j, m.max_jet());
  return j;
}

std::optional<unsigned> DiffPoly::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  unsigned d = terms_.begin()->first.degree();
  if (terms_.rbegin()->first.degree() != d) return std::nullopt;
  return d;
}

bool DiffPoly::is_homogeneous(unsigned degree) const { return !off_degree_term(degree).has_value(); }

std::optional<JetMonomial> DiffPoly::off_degree_term(unsigned degree) const {
  for (const auto& [m, c] : terms_) {
    if (m.degree() != degree) return m;
  }
  return std::nullopt;
}

void DiffPoly::add_term(const JetMonomial& m, const CoeffExpr& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& b) {
  for (const auto& [m, c] : b.terms_) add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& b) {
  for (const auto& [m, c] : b.terms_) add_term(m, -c);
  return *this;
}

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly out = a;
  out += b;
  return out;
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly out = a;
  out -= b;
  return out;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

DiffPoly DiffPoly::scaled(const CoeffExpr& c) const {
  if (c.is_zero()) return DiffPoly{};
  if (c.is_one()) return *this;
  return map_coefficients([&](const CoeffExpr& x) { return x * c; });
}

DiffPoly DiffPoly::pow(unsigned e) const {
  DiffPoly out(1L);
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

DiffPoly DiffPoly::map_coefficients(const std::function<CoeffExpr(const CoeffExpr&)>& fn) const {
  DiffPoly out;
  for (const auto& [m, c] : terms_) {
    CoeffExpr v = fn(c);
    if (!v.is_zero()) out.terms_.emplace_hint(out.terms_.end(), m, std::move(v));
  }
  return out;
}

DiffPoly DiffPoly::degree_part(unsigned degree) const {
  DiffPoly out;
  for (const auto& [m, c] : terms_) {
    if (m.degree() == degree) out.terms_.emplace_hint(out.terms_.end(), m, c);
  }
  return out;
}

std::string DiffPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string cs = c.to_string();
    bool sum = false;
    int depth = 0;
    for (std::size_t i = 1; i < cs.size(); ++i) {
      if (cs[i] == '(') ++depth;
      if (cs[i] == ')') --depth;
      if (depth == 0 && (cs[i] == '+' || cs[i] == '-') && cs[i - 1] == ' ') sum = true;
    }
    std::string t;
    bool negative = false;
    if (sum) {
      t = m.is_one() ? cs : "(" + cs + ")*" + m.to_string();
    } else {
      if (cs[0] == '-') {
        negative = true;
        cs = cs.substr(1);
      }
      if (m.is_one()) {
        t = cs;
      } else if (cs == "1") {
        t = m.to_string();
      } else {
        t = cs + "*" + m.to_string();
      }
    }
    if (out.empty()) {
      out = negative ? "-" + t : t;
    } else {
      out += negative ? " - " : " + ";
      out += t;
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const DiffPoly& p) { return os << p.to_string(); }

// ---- operators ---------------------------------------------------------------

DiffPoly total_x_derivative(const DiffPoly& p, unsigned max_jet) {
  DiffPoly out;
  const JetMonomial u1 = JetMonomial::var(1);
  for (const auto& [m, c] : p.terms()) {
    CoeffExpr dc = c.d_u();
    if (!dc.is_zero()) {
      if (max_jet < 1) throw Error("total derivative exceeds the jet bound u" + std::to_string(max_jet));
      out.add_term(m * u1, dc);
    }
    for (const auto& pw : m.powers()) {
      unsigned j = pw.jet;
      if (j + 1 > max_jet) {
        throw Error("total derivative exceeds the jet bound u" + std::to_string(max_jet));
      }
      out.add_term(m.lowered(j) * JetMonomial::var(j + 1), c * long(pw.exp));
    }
  }
  return out;
}

DiffPoly total_x_derivative(const DiffPoly& p, unsigned times, unsigned max_jet) {
  DiffPoly out = p;
  for (unsigned i = 0; i < times && !out.is_zero(); ++i) out = total_x_derivative(out, max_jet);
  return out;
}

DiffPoly partial(const DiffPoly& p, unsigned j) {
  if (j == 0) return p.map_coefficients([](const CoeffExpr& c) { return c.d_u(); });
  DiffPoly out;
  for (const auto& [m, c] : p.terms()) {
    unsigned e = m.exponent(j);
    if (e > 0) out.add_term(m.lowered(j), c * long(e));
  }
  return out;
}

DiffPoly euler_operator(const DiffPoly& p, unsigned max_jet) {
  DiffPoly out;
  unsigned top = p.max_jet();
  for (unsigned j = 0; j <= top; ++j) {
    DiffPoly t = total_x_derivative(partial(p, j), j, max_jet);
    if (j % 2) {
      out -= t;
    } else {
      out += t;
    }
  }
  return out;
}

std::map<unsigned, CoeffExpr> quasilinear_part(const DiffPoly& p) {
  std::map<unsigned, CoeffExpr> out;
  for (const auto& [m, c] : p.terms()) {
    if (m.is_linear_var()) out.emplace(m.max_jet(), c);
  }
  return out;
}

}  // namespace jetcalc
