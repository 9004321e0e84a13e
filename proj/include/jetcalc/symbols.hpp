#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace jetcalc {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised for malformed input or violated preconditions anywhere in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SymbolKind : std::uint8_t { identity, function, constant };

/// Quadratic rewrite `s^2 = factor * prod(others)` attached to a constant symbol.
struct ConstRelation {
  Rational factor;
  std::vector<std::pair<std::string, unsigned>> others;
};

/// An indeterminate of the coefficient field.
///
/// Function atoms are `name^(order)(u)`; the reserved identity symbol stands for
/// u itself and only ever appears with order 0 (its derivatives are folded into
/// constants). Constants never carry a derivative order.
///
/// Atoms compare by an interned key (symbol index, order). That order is stable
/// within a process but depends on interning order, so anything user-visible
/// uses `canonical_less` instead.
class Atom {
 public:
  constexpr Atom() = default;

  static Atom identity() { return Atom{0u}; }
  static Atom function(std::string_view name, unsigned order = 0);
  static Atom constant(std::string_view name);
  static constexpr Atom from_key(std::uint32_t key) { return Atom{key}; }

  constexpr std::uint32_t key() const { return key_; }
  constexpr std::uint32_t symbol() const { return key_ >> 8; }
  constexpr unsigned order() const { return key_ & 0xffu; }

  const std::string& name() const;
  SymbolKind kind() const;
  bool is_identity() const { return key_ == 0; }
  bool is_constant() const { return kind() == SymbolKind::constant; }
  bool is_function() const { return kind() == SymbolKind::function; }

  Atom with_order(unsigned order) const;
  /// The atom for one more u-derivative. Only valid for function atoms.
  Atom derivative() const { return with_order(order() + 1); }

  std::string to_string() const;

  constexpr auto operator<=>(const Atom&) const = default;

 private:
  constexpr explicit Atom(std::uint32_t key) : key_(key) {}
  std::uint32_t key_ = 0;
};

/// Deterministic order by (name, derivative order); independent of interning.
bool canonical_less(Atom a, Atom b);

/// Declares a constant symbol, optionally with a quadratic relation. The others
/// named in the relation must already be declared constants, which rules out
/// cyclic rewriting. Re-declaring with an identical relation is a no-op.
Atom declare_constant(std::string_view name, std::optional<ConstRelation> relation = std::nullopt);

/// Relation attached to a constant symbol, if any.
const std::optional<ConstRelation>& constant_relation(Atom constant);

bool is_declared_constant(std::string_view name);
bool is_reserved_name(std::string_view name);
bool is_valid_symbol_name(std::string_view name);

}  // namespace jetcalc
