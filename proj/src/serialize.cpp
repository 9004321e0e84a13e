#include "jetcalc/serialize.hpp"

#include "jetcalc/parse.hpp"

namespace jetcalc {

Json to_json(const DiffPoly& p) {
  Json out = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json mono = Json::object();
    for (const auto& pw : m.powers()) mono[std::to_string(pw.jet)] = pw.exp;
    out.push_back({{"monomial", mono}, {"coeff", c.to_string()}});
  }
  return out;
}

DiffPoly diffpoly_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "0") return DiffPoly();
    return parse_diffpoly(j.get<std::string>());
  }
  DiffPoly out;
  for (const auto& term : j) {
    JetMonomial m;
    for (const auto& [jet, exp] : term.at("monomial").items()) {
      m = m * JetMonomial::var(static_cast<unsigned>(std::stoul(jet)), exp.get<unsigned>());
    }
    out.add_term(m, parse_coeff(term.at("coeff").get<std::string>()));
  }
  return out;
}

Json to_json(const EpsSeries& s) {
  Json comps = Json::object();
  for (const auto& [k, p] : s.components()) comps[std::to_string(k)] = to_json(p);
  return {{"kind", to_string(s.kind())}, {"N", s.truncation()}, {"components", comps}};
}

EpsSeries series_from_json(const Json& j) {
  EpsSeries::Components comps;
  for (const auto& [k, p] : j.at("components").items()) {
    comps[static_cast<unsigned>(std::stoul(k))] = diffpoly_from_json(p);
  }
  return EpsSeries(series_kind_from_string(j.at("kind").get<std::string>()), j.at("N").get<unsigned>(),
                   std::move(comps));
}

Json to_json(const ResidualReport& r) {
  Json orders = Json::array();
  for (unsigned k = 0; k <= r.truncation; ++k) {
    Json residual = r.is_zero_at(k) ? Json("0") : to_json(r.at(k));
    orders.push_back({{"order", k}, {"residual", residual}});
  }
  return {{"truncation", r.truncation}, {"orders", orders}};
}

ResidualReport residual_from_json(const Json& j) {
  ResidualReport r;
  r.truncation = j.at("truncation").get<unsigned>();
  for (const auto& o : j.at("orders")) {
    DiffPoly p = diffpoly_from_json(o.at("residual"));
    if (!p.is_zero()) r.residual[o.at("order").get<unsigned>()] = p;
  }
  return r;
}

Json to_json(const MiuraMap& m) {
  return {{"m0", m.leading().m0.to_string()}, {"n0", m.leading().n0.to_string()},
          {"corrections", to_json(m.corrections())}};
}

MiuraMap miura_from_json(const Json& j) {
  LeadingPair lead{parse_coeff(j.at("m0").get<std::string>()), parse_coeff(j.at("n0").get<std::string>())};
  return MiuraMap(lead, series_from_json(j.at("corrections")));
}

Json to_json(const NormalForm& nf) {
  Json inv = Json::object();
  for (const auto& l : normal_letters(nf.current)) inv[l.name] = l.value.to_string();
  return {{"invariants", inv}, {"reducing_map", to_json(nf.reducing_map)}, {"normal_current", to_json(nf.current)}};
}

namespace {

Json constraints_json(const std::vector<Constraint>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back({{"order", c.order}, {"source", c.source}, {"expr", c.expr.to_string()}});
  return out;
}

}  // namespace

Json to_json(const Solution& s) {
  Json solved = Json::object();
  for (const auto& name : s.result.solved) {
    if (const Rule* r = s.result.rules.find(name)) solved[name] = r->value.to_string();
  }
  for (const auto& [name, r] : s.result.rules.rules()) {
    if (r.order == 0 && !solved.contains(name)) solved[name] = r.value.to_string();
  }
  Json quad = Json::array();
  for (const auto& q : s.result.quadratures) {
    quad.push_back({{"name", q.name}, {"derivative", q.rule.order}, {"value", q.rule.value.to_string()}});
  }
  Json counts = Json::object();
  for (const auto& [k, n] : s.result.equation_counts) counts[std::to_string(k)] = n;
  return {{"schema", kSchemaVersion},
          {"order", s.options.order},
          {"branch", to_string(s.options.branch)},
          {"allow_odd", s.options.allow_odd},
          {"equation_counts", counts},
          {"solved", solved},
          {"constraints", constraints_json(s.result.constraints)},
          {"residual_constraints", constraints_json(s.result.residual_constraints)},
          {"quadratures", quad},
          {"free_unknowns", s.result.free_unknowns},
          {"residual_check", s.check.is_zero() ? Json("zero") : to_json(s.check)}};
}

Json to_json(const Claim& c) {
  Json out = {{"kind", to_string(c.kind)}, {"label", c.label}, {"holds", c.holds}};
  if (c.holds) return out;
  switch (c.kind) {
    case Claim::Kind::coeff_equal:
      out["lhs"] = c.a.to_string();
      out["rhs"] = c.b.to_string();
      out["difference"] = (c.a - c.b).to_string();
      break;
    case Claim::Kind::series_equal:
      out["lhs"] = to_json(c.x);
      out["rhs"] = to_json(c.y);
      break;
    case Claim::Kind::bracket_zero:
      out["residual"] = to_json(al_bracket(c.x, c.y, c.order));
      break;
    case Claim::Kind::conjugacy_zero:
      out["residual"] = to_json(verify_conjugacy(c.x, c.y, c.z, c.order));
      break;
  }
  return out;
}

Json to_json(const CaseReport& r) {
  Json claims = Json::array();
  for (const auto& c : r.claims) claims.push_back(to_json(c));
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) witnesses.push_back({{"label", w.label}, {"value", w.value}});
  return {{"schema", kSchemaVersion}, {"case", r.name}, {"title", r.title}, {"pass", r.pass},
          {"claims", claims}, {"witnesses", witnesses}};
}

Json to_json(const CatalogEntry& e) {
  Json rel = Json::array();
  for (const auto& r : e.relations) rel.push_back({{"target", r.target}, {"map", r.map}, {"note", r.note}});
  return {{"name", e.name},
          {"title", e.title},
          {"text", e.text},
          {"kind", to_string(e.kind)},
          {"N", e.truncation},
          {"nonevolutionary", e.nonevolutionary},
          {"constants", e.constants},
          {"conventions", e.conventions},
          {"relations", rel},
          {"note", e.note},
          {"series", to_json(e.series())}};
}

}  // namespace jetcalc
