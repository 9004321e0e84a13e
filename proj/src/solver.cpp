#include "jetcalc/solver.hpp"

#include <algorithm>
#include <set>

namespace jetcalc {

void UnknownRegistry::add(const std::string& name, unsigned order, const JetMonomial& monomial) {
  if (index_.count(name)) throw Error("unknown '" + name + "' registered twice");
  index_[name] = entries_.size();
  entries_.push_back(Entry{name, order, monomial});
}

std::optional<std::size_t> UnknownRegistry::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool UnknownRegistry::contains(Atom atom) const { return atom.is_function() && index_.count(atom.name()) > 0; }

std::size_t UnknownRegistry::count_at(unsigned order) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.order == order; }));
}

bool UnknownRegistry::ranks_before(Atom a, Atom b, bool letters) const {
  std::size_t ia = index_.at(a.name());
  std::size_t ib = index_.at(b.name());
  if (entries_[ia].order != entries_[ib].order) return entries_[ia].order < entries_[ib].order;
  if (a.order() != b.order()) return letters ? a.order() < b.order() : a.order() > b.order();
  return letters ? ia > ib : ia < ib;
}

EpsSeries build_ansatz(unsigned n, Branch branch, bool odd, const CoeffExpr& leading, UnknownRegistry* registry) {
  EpsSeries::Components c;
  c[0] = DiffPoly(leading);
  for (unsigned k = 1; k <= n; ++k) {
    if (branch == Branch::dispersive && k % 2 == 1 && !odd) continue;
    auto basis = monomial_basis(k);
    DiffPoly p;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::string name = capital_name(k, unsigned(i + 1), branch);
      if (registry) registry->add(name, k, basis[i]);
      p.add_term(basis[i], CoeffExpr::function(name));
    }
    c[k] = p;
  }
  return EpsSeries(SeriesKind::current, n, std::move(c));
}

std::vector<std::string> target_letters(unsigned n, Branch branch, bool odd) {
  std::vector<std::string> out;
  for (unsigned k = 2; k <= n; ++k) {
    bool odd_order = k % 2 == 1;
    if (branch == Branch::dispersive && odd_order && !odd) continue;
    auto basis = normal_basis(k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      bool take = branch == Branch::viscous || odd_order || !basis[i].is_linear_var();
      if (take) out.push_back(letter_name(k, unsigned(i + 1), branch));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rules

const Rule* RuleSet::find(const std::string& name) const {
  auto it = rules_.find(name);
  return it == rules_.end() ? nullptr : &it->second;
}

bool RuleSet::covers(Atom atom) const {
  if (!atom.is_function()) return false;
  const Rule* r = find(atom.name());
  return r && atom.order() >= r->order;
}

CoeffExpr RuleSet::rewritten(Atom atom) const {
  auto it = cache_.find(atom);
  if (it != cache_.end()) return it->second;
  const Rule& r = rules_.at(atom.name());
  CoeffExpr value = atom.order() == r.order ? r.value : apply(rewritten(atom.with_order(atom.order() - 1)).d_u());
  cache_[atom] = value;
  return value;
}

CoeffExpr RuleSet::apply(const CoeffExpr& e) const {
  if (rules_.empty()) return e;
  CoeffExpr cur = e;
  for (int round = 0; round < 256; ++round) {
    std::map<Atom, CoeffExpr> sub;
    for (Atom a : cur.atoms()) {
      if (covers(a)) sub.emplace(a, rewritten(a));
    }
    if (sub.empty()) return cur;
    cur = cur.substitute(sub);
  }
  throw Error("rule rewriting does not terminate");
}

DiffPoly RuleSet::apply(const DiffPoly& p) const {
  if (rules_.empty()) return p;
  return p.map_coefficients([&](const CoeffExpr& c) { return apply(c); });
}

EpsSeries RuleSet::apply(const EpsSeries& s) const {
  if (rules_.empty()) return s;
  return s.map_components([&](const DiffPoly& p) { return apply(p); });
}

void RuleSet::set(const std::string& name, Rule rule) {
  rule.value = apply(rule.value);
  rules_[name] = std::move(rule);
  cache_.clear();
  for (auto& [other, r] : rules_) {
    if (other == name) continue;
    r.value = apply(r.value);
  }
  cache_.clear();
}

// ---------------------------------------------------------------------------
// Equations

namespace {

Equation linearize(unsigned order, const JetMonomial& tag, const CoeffExpr& e, const UnknownRegistry& registry) {
  Equation eq;
  eq.order = order;
  eq.tag = tag;
  for (Atom a : e.den().atoms()) {
    if (registry.contains(a)) throw Error("unknown '" + a.to_string() + "' in a denominator");
  }
  std::map<Atom, std::vector<Term>> by_atom;
  std::vector<Term> rest;
  for (const Term& t : e.num().terms()) {
    std::optional<Atom> unknown;
    for (const Factor& f : t.mono.factors()) {
      Atom a = Atom::from_key(f.key);
      if (!registry.contains(a)) continue;
      if (unknown || f.exp != 1) throw Error("equation is not linear in the unknowns at eps^" + std::to_string(order));
      unknown = a;
    }
    if (!unknown) {
      rest.push_back(t);
    } else {
      by_atom[*unknown].push_back(Term{t.mono.without(*unknown), t.coeff});
    }
  }
  for (auto& [a, terms] : by_atom) {
    CoeffExpr c = CoeffExpr::fraction(Poly::from_terms(std::move(terms)), e.den());
    if (!c.is_zero()) eq.coeffs.emplace(a, std::move(c));
  }
  eq.rhs = CoeffExpr::fraction(Poly::from_terms(std::move(rest)), e.den());
  return eq;
}

Poly sign_normalized(const Poly& p) {
  Poly q = p.primitive();
  if (!q.is_zero() && q.canonical_leading().coeff < 0) q = -q;
  return q;
}

/// Coefficients of `e` with respect to monomials in the atoms named `leading`.
std::vector<std::pair<std::string, CoeffExpr>> split_by_leading(const CoeffExpr& e, const std::string& leading) {
  std::map<Monomial, std::vector<Term>> groups;
  for (const Term& t : e.num().terms()) {
    Monomial key, rest;
    for (const Factor& f : t.mono.factors()) {
      Atom a = Atom::from_key(f.key);
      Monomial part = Monomial::of(a, f.exp);
      if (a.is_function() && a.name() == leading) {
        key = key * part;
      } else {
        rest = rest * part;
      }
    }
    groups[key].push_back(Term{rest, t.coeff});
  }
  std::vector<std::pair<std::string, CoeffExpr>> out;
  for (auto& [key, terms] : groups) {
    Poly p = sign_normalized(Poly::from_terms(std::move(terms)));
    if (p.is_zero()) continue;
    out.emplace_back(key.is_one() ? "1" : monomial_to_string(key), CoeffExpr(p));
  }
  return out;
}

struct Row {
  unsigned order;
  std::map<Atom, CoeffExpr> coeffs;
  CoeffExpr rhs;
};

bool is_pure_number(const CoeffExpr& e) { return e.is_rational() && !e.is_zero(); }

void add_constraint(ElimResult& acc, unsigned order, const CoeffExpr& expr, const std::string& leading) {
  for (auto& [source, c] : split_by_leading(expr, leading)) {
    if (is_pure_number(c)) {
      throw Error("non-integrable at order " + std::to_string(order) + ": witness " + expr.to_string());
    }
    bool seen = std::any_of(acc.constraints.begin(), acc.constraints.end(),
                            [&](const Constraint& k) { return k.expr == c; });
    if (!seen) acc.constraints.push_back(Constraint{order, source, c});
  }
}

/// Installs pivot rules; returns consistency rows for families pivoted twice.
std::vector<Row> install(ElimResult& acc, std::map<std::string, Rule> pivots, unsigned order) {
  std::vector<Row> extra;
  for (auto& [name, rule] : pivots) {
    if (const Rule* old = acc.rules.find(name)) {
      // Rows are rewritten before elimination, so an old rule always sits higher.
      CoeffExpr lifted = rule.value;
      for (unsigned j = rule.order; j < old->order; ++j) lifted = lifted.d_u();
      extra.push_back(Row{order, {}, lifted - old->value});
    }
    acc.rules.set(name, rule);
    auto& q = acc.quadratures;
    q.erase(std::remove_if(q.begin(), q.end(), [&](const Quadrature& x) { return x.name == name; }), q.end());
    if (rule.order == 0) {
      acc.solved.push_back(name);
    } else {
      acc.quadratures.push_back(Quadrature{name, rule});
    }
  }
  return extra;
}

void eliminate_rows(std::vector<Row> rows, const UnknownRegistry& registry, const std::string& leading,
                    ElimResult& acc) {
  while (!rows.empty()) {
    // Rewrite with the rules known so far; consistency rows arrive unsplit.
    std::vector<Row> work;
    for (Row& r : rows) {
      CoeffExpr whole = acc.rules.apply(r.rhs);
      for (auto& [a, c] : r.coeffs) whole += acc.rules.apply(c * CoeffExpr::atom(a));
      Equation eq = linearize(r.order, JetMonomial{}, acc.rules.apply(whole), registry);
      if (eq.coeffs.empty() && eq.rhs.is_zero()) continue;
      work.push_back(Row{r.order, std::move(eq.coeffs), std::move(eq.rhs)});
    }
    std::set<Atom> columns_set;
    for (const Row& r : work) {
      for (const auto& [a, c] : r.coeffs) columns_set.insert(a);
    }
    std::vector<Atom> columns(columns_set.begin(), columns_set.end());
    std::sort(columns.begin(), columns.end(), [&](Atom a, Atom b) { return registry.ranks_before(a, b); });

    std::vector<bool> used(work.size(), false);
    std::vector<std::pair<Atom, std::size_t>> pivots;
    for (Atom col : columns) {
      std::size_t p = work.size();
      for (std::size_t i = 0; i < work.size(); ++i) {
        if (!used[i] && work[i].coeffs.count(col)) {
          p = i;
          break;
        }
      }
      if (p == work.size()) continue;
      used[p] = true;
      pivots.emplace_back(col, p);
      Row& pr = work[p];
      CoeffExpr inv = pr.coeffs.at(col).inverse();
      for (auto& [a, c] : pr.coeffs) c *= inv;
      pr.rhs *= inv;
      for (std::size_t i = 0; i < work.size(); ++i) {
        if (i == p) continue;
        auto it = work[i].coeffs.find(col);
        if (it == work[i].coeffs.end()) continue;
        CoeffExpr factor = it->second;
        for (const auto& [a, c] : pr.coeffs) {
          CoeffExpr v = work[i].coeffs[a] - factor * c;
          if (v.is_zero()) {
            work[i].coeffs.erase(a);
          } else {
            work[i].coeffs[a] = std::move(v);
          }
        }
        work[i].rhs -= factor * pr.rhs;
      }
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (!used[i] && !work[i].rhs.is_zero()) add_constraint(acc, work[i].order, work[i].rhs, leading);
    }
    // The lowest derivative pivoted in a family becomes its rule; higher ones
    // turn into consistency rows.
    std::map<std::string, Rule> chosen;
    std::vector<Row> next;
    unsigned order = work.empty() ? 0 : work.front().order;
    std::sort(pivots.begin(), pivots.end(), [](const auto& x, const auto& y) {
      if (x.first.name() != y.first.name()) return x.first.name() < y.first.name();
      return x.first.order() < y.first.order();
    });
    for (const auto& [col, p] : pivots) {
      CoeffExpr value = -work[p].rhs;
      for (const auto& [a, c] : work[p].coeffs) {
        if (a != col) value -= c * CoeffExpr::atom(a);
      }
      auto it = chosen.find(col.name());
      if (it == chosen.end()) {
        chosen.emplace(col.name(), Rule{col.order(), value});
      } else {
        CoeffExpr lifted = it->second.value;
        for (unsigned j = it->second.order; j < col.order(); ++j) lifted = lifted.d_u();
        next.push_back(Row{work[p].order, {}, lifted - value});
      }
    }
    auto extra = install(acc, std::move(chosen), order);
    next.insert(next.end(), extra.begin(), extra.end());
    rows = std::move(next);
  }
}

}  // namespace

LinearSystem setup_conditions(const EpsSeries& omega, const EpsSeries& sigma, const UnknownRegistry& registry,
                              unsigned from, unsigned to, Execution exec) {
  LinearSystem sys;
  for (unsigned k = from; k <= to; ++k) {
    DiffPoly r = al_bracket_order(omega, sigma, k, exec);
    for (const auto& [m, c] : r.terms()) sys.equations.push_back(linearize(k, m, c, registry));
  }
  return sys;
}

ElimResult eliminate(const LinearSystem& sys, const UnknownRegistry& registry, const std::string& leading_name) {
  ElimResult acc;
  std::map<unsigned, std::vector<Row>> by_order;
  for (const Equation& eq : sys.equations) {
    by_order[eq.order].push_back(Row{eq.order, eq.coeffs, eq.rhs});
    ++acc.equation_counts[eq.order];
  }
  for (auto& [k, rows] : by_order) eliminate_rows(std::move(rows), registry, leading_name, acc);
  for (const auto& e : registry.entries()) {
    if (!acc.rules.find(e.name)) acc.free_unknowns.push_back(e.name);
  }
  acc.residual_constraints = acc.constraints;
  return acc;
}

ResidualReport verify_solution(const EpsSeries& omega, const EpsSeries& sigma, unsigned n, const RuleSet& rules,
                               Execution exec) {
  ResidualReport raw = al_bracket(omega, sigma, n, exec);
  ResidualReport out;
  out.truncation = n;
  for (const auto& [k, p] : raw.residual) {
    DiffPoly q = rules.apply(p);
    if (!q.is_zero()) out.residual.emplace(k, std::move(q));
  }
  return out;
}

namespace {

/// Solves constraints for target letters one relation at a time.
void reduce_letters(ElimResult& acc, const UnknownRegistry& letters, std::vector<Constraint> work) {
  std::vector<Constraint> left;
  while (!work.empty()) {
    Constraint c = work.front();
    work.erase(work.begin());
    CoeffExpr e = acc.rules.apply(c.expr);
    if (e.is_zero()) continue;
    if (is_pure_number(e)) {
      throw Error("non-integrable at order " + std::to_string(c.order) + ": witness " + c.expr.to_string());
    }
    std::vector<Atom> atoms = e.atoms();
    auto has_higher = [&](Atom a) {
      return std::any_of(atoms.begin(), atoms.end(), [&](Atom b) { return b.is_function() && b.name() == a.name() && b.order() > a.order(); });
    };
    std::vector<Atom> candidates;
    for (Atom a : e.num().atoms()) {
      if (letters.contains(a) && !e.den().contains(a) && e.num().degree_in(a) == 1 && !has_higher(a)) {
        candidates.push_back(a);
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](Atom a, Atom b) { return letters.ranks_before(a, b, true); });
    if (candidates.empty()) {
      left.push_back(Constraint{c.order, c.source, CoeffExpr(sign_normalized(e.num()))});
      continue;
    }
    Atom t = candidates.front();
    auto parts = e.num().coefficients_in(t);
    CoeffExpr value = -CoeffExpr::fraction(parts[0], parts[1]);
    std::map<std::string, Rule> pivot{{t.name(), Rule{t.order(), value}}};
    for (Row& r : install(acc, std::move(pivot), c.order)) {
      work.push_back(Constraint{r.order, "consistency", r.rhs});
    }
  }
  acc.residual_constraints = std::move(left);
}

}  // namespace

Solution solve(const SolverOptions& options) {
  unsigned n = options.order;
  if (n > 12) throw Error("orders above 12 are not supported");
  if (n > 8 && !options.extended) throw Error("orders above 8 need the extended flag");
  if (options.branch == Branch::dispersive && n % 2 == 1 && !options.allow_odd) {
    throw Error("the dispersive branch runs to an even order");
  }
  Solution sol;
  sol.options = options;
  CoeffExpr leading = options.leading.value_or(CoeffExpr::function("f"));
  std::string leading_name = "f";
  if (!options.leading) {
    leading_name = "f";
  } else if (leading.num().is_single_term() && leading.den().is_one() && leading.atoms().size() == 1 &&
             leading.atoms().front().is_function()) {
    leading_name = leading.atoms().front().name();
  } else {
    leading_name.clear();
  }
  EpsSeries omega = options.omega ? options.omega->truncate(n) : normal_form_current(n, options.branch, options.allow_odd);
  EpsSeries sigma = build_ansatz(n, options.branch, options.allow_odd, leading, &sol.registry);

  UnknownRegistry letters;
  if (options.reduce_letters) {
    std::set<std::string> present;
    for (const auto& [k, p] : omega.components()) {
      for (const auto& [m, c] : p.terms()) {
        for (Atom a : c.atoms()) {
          if (a.is_function()) present.insert(a.name());
        }
      }
    }
    for (const auto& name : target_letters(n, options.branch, options.allow_odd)) {
      if (!present.count(name)) continue;
      unsigned order = 0;
      for (unsigned k = 1; k <= n && order == 0; ++k) {
        auto basis = normal_basis(k);
        for (std::size_t i = 0; i < basis.size(); ++i) {
          if (letter_name(k, unsigned(i + 1), options.branch) == name) {
            order = k;
            letters.add(name, k, basis[i]);
          }
        }
      }
      sol.targets.push_back(name);
    }
  }

  ElimResult& acc = sol.result;
  for (unsigned k = 1; k <= n; ++k) {
    DiffPoly r = acc.rules.apply(al_bracket_order(omega, sigma, k, options.exec));
    std::vector<Row> rows;
    for (const auto& [m, c] : r.terms()) {
      Equation eq = linearize(k, m, c, sol.registry);
      rows.push_back(Row{k, std::move(eq.coeffs), std::move(eq.rhs)});
    }
    acc.equation_counts[k] = rows.size();
    std::size_t before = acc.constraints.size();
    eliminate_rows(std::move(rows), sol.registry, leading_name, acc);
    if (options.reduce_letters) {
      std::vector<Constraint> work = acc.residual_constraints;
      work.insert(work.end(), acc.constraints.begin() + static_cast<std::ptrdiff_t>(before), acc.constraints.end());
      reduce_letters(acc, letters, std::move(work));
    } else {
      acc.residual_constraints.insert(acc.residual_constraints.end(),
                                      acc.constraints.begin() + static_cast<std::ptrdiff_t>(before),
                                      acc.constraints.end());
    }
    omega = acc.rules.apply(omega);
    sigma = acc.rules.apply(sigma);
  }
  for (const auto& e : sol.registry.entries()) {
    if (!acc.rules.find(e.name)) acc.free_unknowns.push_back(e.name);
  }
  sol.omega = omega;
  sol.sigma = sigma;
  sol.check = verify_solution(omega, sigma, n, acc.rules, options.exec);
  return sol;
}

}  // namespace jetcalc
