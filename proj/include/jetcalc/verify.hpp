#pragma once

#include <string>
#include <vector>

#include "jetcalc/bracket.hpp"
#include "jetcalc/catalog.hpp"

namespace jetcalc {

/// One symbolic statement checked by a case, kept with its operands so it can
/// be re-checked independently.
struct Claim {
  enum class Kind {
    coeff_equal,     // a == b
    series_equal,    // x == y
    bracket_zero,    // {x, y} = 0 through eps^order
    conjugacy_zero,  // u = x(v) maps v_t = y onto u_t = z through eps^order
  };
  Kind kind = Kind::coeff_equal;
  std::string label;
  CoeffExpr a, b;
  EpsSeries x, y, z;
  unsigned order = 0;
  bool holds = false;
};

std::string to_string(Claim::Kind kind);

struct Witness {
  std::string label;
  std::string value;
};

struct CaseReport {
  std::string name;
  std::string title;
  bool pass = false;
  std::vector<Claim> claims;
  std::vector<Witness> witnesses;
};

struct CaseInfo {
  std::string name;
  std::string title;
};

/// Registered cases, in run order.
const std::vector<CaseInfo>& verify_cases();

/// Runs one case. Throws on an unknown name.
CaseReport verify_paper(const std::string& name, Execution exec = Execution::parallel);

/// Building blocks of the cases.
Claim coeff_claim(std::string label, const CoeffExpr& a, const CoeffExpr& b);
Claim series_claim(std::string label, const EpsSeries& x, const EpsSeries& y);
Claim bracket_claim(std::string label, const EpsSeries& alpha, const EpsSeries& beta, unsigned n,
                    Execution exec = Execution::parallel);
Claim conjugacy_claim(std::string label, const EpsSeries& g, const EpsSeries& xv, const EpsSeries& xu, unsigned n);

/// Solves a relation linear in `atom` for it. Throws when it is not linear.
CoeffExpr solve_linear(const CoeffExpr& relation, Atom atom);

/// Sets every derivative of the function `name` to zero.
CoeffExpr freeze_derivatives(const CoeffExpr& e, const std::string& name);

/// Random identity-leading map with degree-k corrections for k = 1..N.
MiuraMap random_identity_map(std::uint64_t seed, unsigned n);

}  // namespace jetcalc
