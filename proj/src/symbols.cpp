#include "jetcalc/symbols.hpp"

#include <array>
#include <atomic>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace jetcalc {
namespace {

struct SymbolInfo {
  std::string name;
  SymbolKind kind = SymbolKind::function;
  std::optional<ConstRelation> relation;
};

// Entries are written once before `count` is published, so readers indexing
// below `count` need no lock.
class SymbolTable {
 public:
  static constexpr std::size_t kCapacity = 1u << 16;

  SymbolTable() : entries_(std::make_unique<SymbolInfo[]>(kCapacity)) {
    entries_[0] = SymbolInfo{"u", SymbolKind::identity, std::nullopt};
    index_.emplace("u", 0);
    count_.store(1, std::memory_order_release);
  }

  std::uint32_t intern(std::string_view name, SymbolKind kind, std::optional<ConstRelation> relation) {
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(std::string(name)); it != index_.end()) {
      const SymbolInfo& info = entries_[it->second];
      if (info.kind != kind) {
        throw Error("symbol '" + std::string(name) + "' already declared as a " +
                    (info.kind == SymbolKind::constant ? "constant" : "function"));
      }
      if (kind == SymbolKind::constant && relation && !same_relation(info.relation, relation)) {
        throw Error("constant '" + std::string(name) + "' redeclared with a different relation");
      }
      return it->second;
    }
    std::size_t n = count_.load(std::memory_order_relaxed);
    if (n >= kCapacity) throw Error("symbol table exhausted");
    entries_[n] = SymbolInfo{std::string(name), kind, std::move(relation)};
    index_.emplace(std::string(name), static_cast<std::uint32_t>(n));
    count_.store(n + 1, std::memory_order_release);
    return static_cast<std::uint32_t>(n);
  }

  std::optional<std::uint32_t> find(std::string_view name) const {
    std::lock_guard lock(mutex_);
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const SymbolInfo& at(std::uint32_t index) const {
    if (index >= count_.load(std::memory_order_acquire)) throw Error("unknown symbol index");
    return entries_[index];
  }

 private:
  static bool same_relation(const std::optional<ConstRelation>& a, const std::optional<ConstRelation>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->factor == b->factor && a->others == b->others;
  }

  std::unique_ptr<SymbolInfo[]> entries_;
  std::atomic<std::size_t> count_{0};
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

SymbolTable& table() {
  static SymbolTable instance;
  return instance;
}

}  // namespace

bool is_valid_symbol_name(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

bool is_reserved_name(std::string_view name) {
  if (name == "u" || name == "id" || name == "eps" || name == "Dx") return true;
  if (name.size() >= 2 && name[0] == 'u') {
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    }
    return true;
  }
  return false;
}

Atom Atom::function(std::string_view name, unsigned order) {
  if (name == "id" || name == "u") {
    if (order != 0) throw Error("derivatives of the identity are not atoms");
    return identity();
  }
  if (!is_valid_symbol_name(name) || is_reserved_name(name)) {
    throw Error("invalid function name '" + std::string(name) + "'");
  }
  if (order > 0xffu) throw Error("derivative order too large");
  std::uint32_t index = table().intern(name, SymbolKind::function, std::nullopt);
  return Atom{(index << 8) | order};
}

Atom Atom::constant(std::string_view name) {
  auto index = table().find(name);
  if (!index || table().at(*index).kind != SymbolKind::constant) {
    throw Error("constant '" + std::string(name) + "' has not been declared");
  }
  return Atom{*index << 8};
}

Atom declare_constant(std::string_view name, std::optional<ConstRelation> relation) {
  if (!is_valid_symbol_name(name) || is_reserved_name(name)) {
    throw Error("invalid constant name '" + std::string(name) + "'");
  }
  if (relation) {
    if (relation->factor == 0) throw Error("constant relation factor must be nonzero");
    for (const auto& [other, exponent] : relation->others) {
      if (other == name) throw Error("constant relation may not refer to itself");
      if (!is_declared_constant(other)) {
        throw Error("constant relation refers to undeclared constant '" + other + "'");
      }
      if (exponent == 0) throw Error("zero exponent in constant relation");
    }
  }
  std::uint32_t index = table().intern(name, SymbolKind::constant, std::move(relation));
  return Atom::from_key(index << 8);
}

const std::optional<ConstRelation>& constant_relation(Atom constant) {
  return table().at(constant.symbol()).relation;
}

bool is_declared_constant(std::string_view name) {
  auto index = table().find(name);
  return index && table().at(*index).kind == SymbolKind::constant;
}

const std::string& Atom::name() const { return table().at(symbol()).name; }

SymbolKind Atom::kind() const { return table().at(symbol()).kind; }

Atom Atom::with_order(unsigned order) const {
  if (kind() != SymbolKind::function) {
    if (order == 0) return *this;
    throw Error("only function atoms carry derivative orders");
  }
  if (order > 0xffu) throw Error("derivative order too large");
  return Atom{(key_ & ~0xffu) | order};
}

std::string Atom::to_string() const {
  if (is_identity()) return "u";
  std::string out = name();
  out.append(order(), '\'');
  return out;
}

bool canonical_less(Atom a, Atom b) {
  if (a.symbol() == b.symbol()) return a.order() < b.order();
  if (a.is_identity()) return true;
  if (b.is_identity()) return false;
  int cmp = a.name().compare(b.name());
  return cmp < 0;
}

}  // namespace jetcalc
