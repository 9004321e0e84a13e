#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jetcalc/parse.hpp"
#include "jetcalc/serialize.hpp"

using namespace jetcalc;

namespace {

struct Globals {
  std::string format = "text";
  std::vector<std::string> constants;
  bool serial = false;

  bool json() const { return format == "json"; }
  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
};

/// `@path` reads the expression from a file.
std::string read_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw Error("cannot read '" + arg.substr(1) + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EpsSeries series_arg(const std::string& text, unsigned n, SeriesKind kind) {
  return parse_series(read_arg(text), n).with_kind(kind);
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_residual(const Globals& g, const ResidualReport& r) {
  if (g.json()) {
    Json out = to_json(r);
    out["schema"] = kSchemaVersion;
    print_json(out);
    return;
  }
  if (r.is_zero()) {
    std::cout << "0\n";
    return;
  }
  for (const auto& [k, p] : r.residual) std::cout << "eps^" << k << ": " << p << "\n";
}

EpsSeries current_for(const std::string& eq, const std::string& text, unsigned n, bool normalize_leading) {
  EpsSeries omega;
  if (!eq.empty()) {
    const CatalogEntry& e = catalog_entry(eq);
    if (e.kind != SeriesKind::current) throw Error("catalog entry '" + eq + "' is a flow, not a current");
    omega = e.series();
    if (e.nonevolutionary) omega = neumann_invert(omega, n % 2 ? n + 1 : n);
    omega = EpsSeries(SeriesKind::current, n, omega.truncate(n).components());
  } else if (!text.empty()) {
    omega = series_arg(text, n, SeriesKind::current);
  } else {
    throw Error("give --eq or --current");
  }
  if (normalize_leading) omega = rescale_current(omega, normalizing_scale(omega));
  return omega;
}

int run_bracket(const Globals& g, const std::string& a, const std::string& b, unsigned n) {
  ResidualReport r = al_bracket(series_arg(a, n, SeriesKind::current), series_arg(b, n, SeriesKind::current), n, g.exec());
  print_residual(g, r);
  return r.is_zero() ? 0 : 1;
}

int run_commute(const Globals& g, const std::string& x, const std::string& y, unsigned n) {
  ResidualReport r =
      evolutionary_commutator(series_arg(x, n, SeriesKind::vectorfield), series_arg(y, n, SeriesKind::vectorfield), n, g.exec());
  print_residual(g, r);
  return r.is_zero() ? 0 : 1;
}

int run_normalize(const Globals& g, const EpsSeries& omega, unsigned n) {
  NormalForm nf = to_normal_form(omega, n);
  if (g.json()) {
    Json out = to_json(nf);
    out["schema"] = kSchemaVersion;
    print_json(out);
  } else {
    std::cout << "normal current: " << nf.current.to_string() << "\n";
    std::cout << "reducing map:   " << nf.reducing_map.to_string() << "\n";
  }
  return 0;
}

int run_invariants(const Globals& g, const EpsSeries& omega, unsigned n, bool all) {
  NormalForm nf = to_normal_form(omega, n);
  Json inv = Json::object();
  for (const auto& l : central_invariants(nf)) {
    if (!all && !l.quasilinear()) continue;
    if (g.json()) {
      inv[l.name] = l.value.to_string();
    } else {
      std::cout << l.name << " = " << l.value.to_string() << "\n";
    }
  }
  if (g.json()) print_json({{"schema", kSchemaVersion}, {"invariants", inv}});
  return 0;
}

int run_solve(const Globals& g, SolverOptions o) {
  o.exec = g.exec();
  Solution s = solve(o);
  if (g.json()) {
    print_json(to_json(s));
  } else {
    std::cout << "order " << o.order << ", " << to_string(o.branch) << (o.allow_odd ? ", odd orders admitted" : "")
              << "\n";
    for (const auto& [k, c] : s.result.equation_counts) std::cout << "eps^" << k << ": " << c << " equations\n";
    std::cout << "solved:\n";
    for (const auto& [name, r] : s.result.rules.rules()) {
      if (r.order == 0) std::cout << "  " << name << " = " << r.value.to_string() << "\n";
    }
    if (!s.result.quadratures.empty()) std::cout << "quadratures:\n";
    for (const auto& q : s.result.quadratures) {
      std::cout << "  " << q.name << "^(" << q.rule.order << ") = " << q.rule.value.to_string() << "\n";
    }
    std::cout << "constraints:\n";
    for (const auto& c : s.result.constraints) {
      std::cout << "  eps^" << c.order << " [" << c.source << "]: " << c.expr.to_string() << " = 0\n";
    }
    std::cout << "residual constraints: " << s.result.residual_constraints.size() << "\n";
    std::cout << "residual check: " << (s.check.is_zero() ? "zero" : "NONZERO") << "\n";
  }
  return s.check.is_zero() && s.result.residual_constraints.empty() ? 0 : 1;
}

void print_case_text(const CaseReport& r, bool verbose) {
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.title << "\n";
  std::size_t held = 0;
  for (const auto& c : r.claims) held += c.holds;
  std::cout << "  claims: " << held << "/" << r.claims.size() << " hold\n";
  for (const auto& c : r.claims) {
    if (!c.holds) std::cout << "  failed: " << c.label << "\n";
  }
  for (const auto& w : r.witnesses) {
    if (verbose || !r.pass) std::cout << "  " << w.label << ": " << w.value << "\n";
  }
}

int run_verify(const Globals& g, std::vector<std::string> names, unsigned jobs, bool verbose) {
  if (names.empty() || (names.size() == 1 && names[0] == "all")) {
    names.clear();
    for (const auto& c : verify_cases()) names.push_back(c.name);
  }
  for (const auto& n : names) {
    bool known = false;
    for (const auto& c : verify_cases()) known = known || c.name == n;
    if (!known) throw Error("unknown case '" + n + "'");
  }
  std::vector<CaseReport> reports(names.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < names.size(); ++i) reports[i] = verify_paper(names[i], g.exec());
  } else {
    std::vector<std::future<CaseReport>> pending;
    for (std::size_t start = 0; start < names.size(); start += jobs) {
      pending.clear();
      for (std::size_t i = start; i < std::min(names.size(), start + jobs); ++i) {
        pending.push_back(std::async(std::launch::async, [&, i] { return verify_paper(names[i], g.exec()); }));
      }
      for (std::size_t i = 0; i < pending.size(); ++i) reports[start + i] = pending[i].get();
    }
  }
  bool ok = true;
  Json all = Json::array();
  for (const auto& r : reports) {
    ok = ok && r.pass;
    if (g.json()) {
      all.push_back(to_json(r));
    } else {
      print_case_text(r, verbose);
    }
  }
  if (g.json()) print_json({{"schema", kSchemaVersion}, {"pass", ok}, {"cases", all}});
  return ok ? 0 : 1;
}

int run_catalog_list(const Globals& g) {
  if (g.json()) {
    Json out = Json::array();
    for (const auto& e : catalog()) out.push_back({{"name", e.name}, {"title", e.title}, {"text", e.text}});
    print_json({{"schema", kSchemaVersion}, {"entries", out}});
    return 0;
  }
  for (const auto& e : catalog()) std::cout << e.name << "\t" << e.title << "\n";
  return 0;
}

int run_catalog_show(const Globals& g, const std::string& name) {
  const CatalogEntry& e = catalog_entry(name);
  if (g.json()) {
    Json out = to_json(e);
    out["schema"] = kSchemaVersion;
    print_json(out);
    return 0;
  }
  std::cout << e.name << ": " << e.title << "\n";
  std::cout << "  " << (e.kind == SeriesKind::current ? "current: " : "flow: ") << e.series().to_string() << "\n";
  std::cout << "  conventions: " << e.conventions << "\n";
  if (e.nonevolutionary) std::cout << "  left-hand side: (1 - eps^2 Dx^2) u_t\n";
  for (const auto& c : e.constants) std::cout << "  constant: " << c << "\n";
  for (const auto& r : e.relations) std::cout << "  -> " << r.target << ": " << r.note << "\n";
  std::cout << "  note: " << e.note << "\n";
  return 0;
}

struct EvalOptions {
  std::string expr;
  unsigned order = 8;
  unsigned dx = 0;
  int partial = -1;
  bool euler = false;
  std::string kind = "general";
};

int run_eval(const Globals& g, const EvalOptions& o) {
  EpsSeries s = parse_series(read_arg(o.expr), o.order).with_kind(series_kind_from_string(o.kind));
  s = s.map_components([&](const DiffPoly& p) {
    DiffPoly q = p;
    if (o.dx) q = total_x_derivative(q, o.dx, kDefaultMaxJet);
    if (o.partial >= 0) q = partial(q, static_cast<unsigned>(o.partial));
    if (o.euler) q = euler_operator(q);
    return q;
  });
  if (o.dx || o.partial >= 0 || o.euler) s = s.with_kind(SeriesKind::general);
  if (g.json()) {
    Json out = to_json(s);
    out["schema"] = kSchemaVersion;
    print_json(out);
  } else {
    std::cout << (s.is_zero() ? "0" : s.to_string()) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jetcalc: differential polynomials, brackets, normal forms and symmetry solving"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--const", g.constants, "Declare a constant: 'name' or 'name^2 = q*other'");
  app.add_flag("--serial", g.serial, "Use the serial kernels");

  std::function<int()> action;

  std::string a, b;
  unsigned n = 0;
  auto* bracket = app.add_subcommand("bracket", "Bracket {a, b} of two currents; exit 0 iff it vanishes");
  bracket->add_option("--a", a, "First current")->required();
  bracket->add_option("--b", b, "Second current")->required();
  bracket->add_option("-N,--order", n, "Truncation order")->capture_default_str();
  bracket->callback([&] { action = [&] { return run_bracket(g, a, b, n); }; });

  auto* commute = app.add_subcommand("commute", "Commutator [X, Y] of two flows; exit 0 iff it vanishes");
  commute->add_option("--x", a, "First flow")->required();
  commute->add_option("--y", b, "Second flow")->required();
  commute->add_option("-N,--order", n, "Truncation order")->capture_default_str();
  commute->callback([&] { action = [&] { return run_commute(g, a, b, n); }; });

  std::string eq, cur;
  bool normalize_leading = false, all_letters = false;
  unsigned nf_order = 4;
  auto* normalize = app.add_subcommand("normalize", "Normal form of a current and its reducing map");
  auto* invariants = app.add_subcommand("invariants", "Central invariants of a current");
  for (auto* sub : {normalize, invariants}) {
    sub->add_option("--eq", eq, "Catalog entry");
    sub->add_option("--current", cur, "Current, e.g. 'u^2 + eps^2*u2'");
    sub->add_option("-N,--order", nf_order, "Truncation order")->capture_default_str();
    sub->add_flag("--normalize-leading", normalize_leading, "Rescale u so the leading part is u^2");
  }
  invariants->add_flag("--all", all_letters, "Also list the non-quasilinear letters");
  normalize->callback([&] {
    action = [&] { return run_normalize(g, current_for(eq, cur, nf_order, normalize_leading), nf_order); };
  });
  invariants->callback([&] {
    action = [&] { return run_invariants(g, current_for(eq, cur, nf_order, normalize_leading), nf_order, all_letters); };
  });

  SolverOptions so;
  std::string branch = "dispersive";
  bool no_reduce = false;
  auto* solve_cmd = app.add_subcommand("solve", "Symmetries of the generic normal form order by order");
  solve_cmd->add_option("-N,--order", so.order, "Truncation order")->capture_default_str();
  solve_cmd->add_option("--branch", branch, "Letter family")
      ->check(CLI::IsMember({"dispersive", "viscous"}))
      ->capture_default_str();
  solve_cmd->add_flag("--allow-odd", so.allow_odd, "Admit odd eps-orders in the dispersive branch");
  solve_cmd->add_flag("--extended", so.extended, "Allow orders above 8");
  solve_cmd->add_flag("--no-reduce", no_reduce, "Keep constraints unsolved");
  solve_cmd->callback([&] {
    action = [&] {
      so.branch = branch_from_string(branch);
      so.reduce_letters = !no_reduce;
      return run_solve(g, so);
    };
  });

  std::vector<std::string> cases;
  unsigned jobs = 1;
  bool verbose = false;
  auto* verify = app.add_subcommand("verify-paper", "Run verification cases; exit 0 iff all pass");
  verify->add_option("cases", cases, "Case names, or 'all'");
  verify->add_option("-j,--jobs", jobs, "Cases run concurrently")->capture_default_str();
  verify->add_flag("-v,--verbose", verbose, "Print witnesses of passing cases too");
  verify->add_flag("--list", [&](std::int64_t) { cases = {"--list"}; }, "List the cases");
  verify->callback([&] {
    action = [&] {
      if (cases.size() == 1 && cases[0] == "--list") {
        for (const auto& c : verify_cases()) std::cout << c.name << "\t" << c.title << "\n";
        return 0;
      }
      return run_verify(g, cases, jobs, verbose);
    };
  });

  std::string entry_name;
  auto* cat = app.add_subcommand("catalog", "Equation catalog");
  cat->require_subcommand(1);
  auto* list = cat->add_subcommand("list", "List entries");
  list->callback([&] { action = [&] { return run_catalog_list(g); }; });
  auto* show = cat->add_subcommand("show", "Show one entry");
  show->add_option("name", entry_name, "Entry name")->required();
  show->callback([&] { action = [&] { return run_catalog_show(g, entry_name); }; });

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Parse, transform and print an expression in canonical form");
  eval->add_option("expr", eo.expr, "Expression, or @file")->required();
  eval->add_option("-N,--order", eo.order, "Truncation order")->capture_default_str();
  eval->add_option("--kind", eo.kind, "Grading check: current, vectorfield, miura_correction, general")
      ->capture_default_str();
  eval->add_option("--dx", eo.dx, "Apply Dx this many times");
  eval->add_option("--partial", eo.partial, "Partial derivative in u_(j)");
  eval->add_flag("--euler", eo.euler, "Apply the Euler operator");
  eval->callback([&] { action = [&] { return run_eval(g, eo); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    for (const auto& decl : g.constants) parse_constant_declaration(decl);
    return action ? action() : 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
