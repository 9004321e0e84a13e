#pragma once

#include <map>
#include <optional>

#include "jetcalc/series.hpp"

namespace jetcalc {

enum class Execution { serial, parallel };

/// Residual of a bracket or commutator, one differential polynomial per eps-order.
struct ResidualReport {
  unsigned truncation = 0;
  std::map<unsigned, DiffPoly> residual;  // nonzero orders only

  bool is_zero() const { return residual.empty(); }
  bool is_zero_at(unsigned k) const { return residual.find(k) == residual.end(); }
  std::optional<unsigned> first_nonzero_order() const;
  DiffPoly at(unsigned k) const;
};

/// {alpha, beta} = sum_j Dx^{j+1} beta * d alpha/du_(j) - Dx^{j+1} alpha * d beta/du_(j),
/// componentwise in eps up to order N.
ResidualReport al_bracket(const EpsSeries& alpha, const EpsSeries& beta, unsigned n,
                          Execution exec = Execution::parallel);

/// [X, Y] = sum_j (Dx^j X) dY/du_(j) - (Dx^j Y) dX/du_(j) up to order N.
ResidualReport evolutionary_commutator(const EpsSeries& x, const EpsSeries& y, unsigned n,
                                       Execution exec = Execution::parallel);

/// The eps^k component of {alpha, beta} alone.
DiffPoly al_bracket_order(const EpsSeries& alpha, const EpsSeries& beta, unsigned k,
                          Execution exec = Execution::parallel);

/// Bracket of two single components (the kernel behind al_bracket).
DiffPoly al_bracket_component(const DiffPoly& alpha, const DiffPoly& beta, unsigned max_jet);

/// Number of OpenMP threads used by the parallel kernels (1 without OpenMP).
int parallel_threads();

}  // namespace jetcalc
