#pragma once

#include "json.hpp"

#include "jetcalc/solver.hpp"
#include "jetcalc/verify.hpp"

namespace jetcalc {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// [{"monomial": {"j": exp, ...}, "coeff": "..."}, ...]
Json to_json(const DiffPoly& p);
DiffPoly diffpoly_from_json(const Json& j);

/// {"kind", "N", "components": {"k": DiffPoly}}
Json to_json(const EpsSeries& s);
EpsSeries series_from_json(const Json& j);

/// {"truncation", "orders": [{"order": k, "residual": DiffPoly | "0"}]}
Json to_json(const ResidualReport& r);
ResidualReport residual_from_json(const Json& j);

Json to_json(const MiuraMap& m);
MiuraMap miura_from_json(const Json& j);

/// {"invariants": {...}, "reducing_map": ..., "normal_current": ...}
Json to_json(const NormalForm& nf);

/// {"schema", "order", "branch", "solved", "constraints", "quadratures", "residual_check"}
Json to_json(const Solution& s);

Json to_json(const Claim& c);
Json to_json(const CaseReport& r);
Json to_json(const CatalogEntry& e);

}  // namespace jetcalc
