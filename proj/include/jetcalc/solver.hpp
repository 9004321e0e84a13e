#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jetcalc/bracket.hpp"
#include "jetcalc/normalform.hpp"

namespace jetcalc {

/// Unknown coefficient functions of the symmetry ansatz, in introduction order.
class UnknownRegistry {
 public:
  struct Entry {
    std::string name;
    unsigned order;  // eps-order of introduction
    JetMonomial monomial;
  };

  void add(const std::string& name, unsigned order, const JetMonomial& monomial);
  const std::vector<Entry>& entries() const { return entries_; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool contains(Atom atom) const;
  std::size_t count_at(unsigned order) const;
  /// Elimination rank: lower eps-order first, then higher derivative order, then
  /// registry order. With `letters`: lower derivative order first, then later
  /// registry entries first.
  bool ranks_before(Atom a, Atom b, bool letters = false) const;

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

/// f + sum_k eps^k sum_i U_{k,i} m_i over the full degree-k monomial basis.
/// Dispersive: even orders, plus odd ones when `odd`; viscous: every order.
EpsSeries build_ansatz(unsigned n, Branch branch, bool odd, const CoeffExpr& leading, UnknownRegistry* registry);

/// One coefficient of one jet monomial of the bracket residual at one eps-order:
/// sum coeffs[U] U + rhs = 0.
struct Equation {
  unsigned order = 0;
  JetMonomial tag;
  std::map<Atom, CoeffExpr> coeffs;
  CoeffExpr rhs;
};

struct LinearSystem {
  std::vector<Equation> equations;
};

/// Splits each eps^k component of {omega, sigma} for k in [from, to] into
/// equations linear in the unknown atoms of `registry`.
LinearSystem setup_conditions(const EpsSeries& omega, const EpsSeries& sigma, const UnknownRegistry& registry,
                              unsigned from, unsigned to, Execution exec = Execution::parallel);

/// U^(order) = value. Derivatives U^(order + j) rewrite to d_u^j value.
struct Rule {
  unsigned order = 0;
  CoeffExpr value;
};

/// Triangular set of rules keyed by function name.
class RuleSet {
 public:
  const std::map<std::string, Rule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  const Rule* find(const std::string& name) const;
  /// Whether `atom` is rewritten by some rule.
  bool covers(Atom atom) const;
  /// Adds or replaces the rule for `name` and back-substitutes it into the others.
  void set(const std::string& name, Rule rule);
  CoeffExpr apply(const CoeffExpr& e) const;
  DiffPoly apply(const DiffPoly& p) const;
  EpsSeries apply(const EpsSeries& s) const;

 private:
  CoeffExpr rewritten(Atom atom) const;
  std::map<std::string, Rule> rules_;
  mutable std::map<Atom, CoeffExpr> cache_;
};

/// Unknown-free relation among the normal-form letters.
struct Constraint {
  unsigned order = 0;
  std::string source;  // f-monomial whose coefficient produced it, or "1"
  CoeffExpr expr;      // expr = 0, primitive numerator
};

struct Quadrature {
  std::string name;
  Rule rule;  // name^(rule.order) = rule.value with lower derivatives opaque
};

struct ElimResult {
  RuleSet rules;                            // capitals and letters
  std::vector<std::string> solved;          // names pivoted at order 0, in pivot order
  std::vector<Quadrature> quadratures;      // names pivoted on a derivative
  std::vector<Constraint> constraints;      // every relation emitted, in order
  std::vector<Constraint> residual_constraints;  // relations left after letter reduction
  std::vector<std::string> free_unknowns;   // capitals never pivoted
  std::map<unsigned, std::size_t> equation_counts;
};

/// Reduced row echelon elimination of `sys` in the registry's unknowns. Pivot
/// rules go into `rules`; unknown-free rows become constraints split by the
/// monomials of `leading_name` atoms.
ElimResult eliminate(const LinearSystem& sys, const UnknownRegistry& registry, const std::string& leading_name);

struct SolverOptions {
  unsigned order = 8;
  Branch branch = Branch::dispersive;
  bool allow_odd = false;
  bool extended = false;                 // required for orders above 8
  bool reduce_letters = true;            // solve constraints for dependent letters
  std::optional<EpsSeries> omega;        // defaults to normal_form_current
  std::optional<CoeffExpr> leading;      // defaults to f(u)
  Execution exec = Execution::parallel;
};

struct Solution {
  SolverOptions options;
  UnknownRegistry registry;
  std::vector<std::string> targets;  // letters solved from constraints
  EpsSeries omega;                   // with every rule applied
  EpsSeries sigma;                   // with every rule applied
  ElimResult result;
  ResidualReport check;              // verify_solution of the final pair
};

/// Order-by-order: builds the ansatz, sets up and eliminates each eps-order,
/// reduces dependent letters, and re-verifies from scratch.
Solution solve(const SolverOptions& options);

/// Recomputes {omega, sigma} to order N and rewrites the residual with `rules`.
ResidualReport verify_solution(const EpsSeries& omega, const EpsSeries& sigma, unsigned n, const RuleSet& rules,
                               Execution exec = Execution::parallel);

/// Letters solved from constraints: non-quasilinear and odd letters (dispersive),
/// every letter but a (viscous).
std::vector<std::string> target_letters(unsigned n, Branch branch, bool odd);

}  // namespace jetcalc
