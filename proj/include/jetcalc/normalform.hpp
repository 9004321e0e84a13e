#pragma once

#include <string>
#include <vector>

#include "jetcalc/miura.hpp"

namespace jetcalc {

/// Which family of letters names the normal-form coefficients.
enum class Branch { dispersive, viscous };

std::string to_string(Branch branch);
Branch branch_from_string(const std::string& name);

/// Degree-k monomials free of u_x, in basis order (u4, u2^2, ...).
std::vector<JetMonomial> normal_basis(unsigned degree);

/// Name of the normal-form letter at eps^k with 1-based index in normal_basis(k).
/// Dispersive: b1 (eps^2), c1 c2 (eps^4), d1..d4, e1..e7, ...; odd orders q<k>_<i>.
/// Viscous: a (eps^1), b1, c1, d1 d2, e1 e2, ...
std::string letter_name(unsigned k, unsigned index, Branch branch);

/// Name of the symmetry coefficient at eps^k with 1-based index in monomial_basis(k).
/// Dispersive: B1 B2, C1..C5, D1..D11, ...; odd orders Q<k>_<i>. Viscous: S<k>_<i>.
std::string capital_name(unsigned k, unsigned index, Branch branch);

/// One coefficient of a normal-form current.
struct Letter {
  std::string name;
  unsigned order;
  JetMonomial monomial;
  CoeffExpr value;
  bool quasilinear() const { return monomial.is_linear_var(); }
};

struct NormalForm {
  EpsSeries current;
  MiuraMap reducing_map;  // v = m(u) with the normal current written in v
};

/// Reduces a current to the unique form whose eps^k parts (k > 1) are free of u_x,
/// using v = u + eps^k Dx G_k order by order. Throws when the linear system for
/// G_k is singular.
NormalForm to_normal_form(const EpsSeries& omega, unsigned n);

/// Current of the flow after v = u + eps^k Dx g, written in v.
EpsSeries transform_current(const EpsSeries& omega, const DiffPoly& g, unsigned k, unsigned n);

/// Coefficients of a normal-form current, named by letter_name. Branch viscous
/// when any odd component is present, dispersive otherwise.
std::vector<Letter> central_invariants(const NormalForm& nf);
std::vector<Letter> normal_letters(const EpsSeries& current);

/// The transcribed relation c2 = [117 b1'' b1^3 - 84 b1^2 b1'^2 + 670 b1' c1
/// - 330 b1^2 c1' + 560 b1 d1 - 800 c1^2] / (144 b1^2). Throws when b1 = 0.
CoeffExpr transcribed_c2(const CoeffExpr& b1, const CoeffExpr& c1, const CoeffExpr& d1);

struct DependentCoefficients {
  CoeffExpr c2;
};
DependentCoefficients dependent_coefficients(const CoeffExpr& b1, const CoeffExpr& c1, const CoeffExpr& d1);

/// Generic normal-form current u^2 + sum eps^k (letters * normal_basis(k)).
/// Dispersive: even orders only unless `odd`; viscous: every order.
EpsSeries normal_form_current(unsigned n, Branch branch, bool odd = false);

/// u^2/2 + eps^2/24 (2c u2 + c' u1^2) + eps^4 (2p u4 + 4p' u1u3 + 3p' u2^2 + 2p'' u1^2 u2).
EpsSeries hamiltonian_current(const CoeffExpr& c, const CoeffExpr& p);

/// u^2/2 + eps^2 c/12 u2 + eps^4 (2p u4 + (4c'^2 + 3c c'')/1152 u2^2).
EpsSeries hamiltonian_normal_current(const CoeffExpr& c, const CoeffExpr& p);

/// v = u + eps^2 Dx(alpha u1) + eps^4 Dx(beta0 u3 + beta1 u1u2 + beta2 u1^3).
MiuraMap hamiltonian_map(const CoeffExpr& c, const CoeffExpr& p);

}  // namespace jetcalc
