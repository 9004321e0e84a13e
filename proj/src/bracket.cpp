#include "jetcalc/bracket.hpp"

#include <exception>
#include <functional>
#include <vector>

#ifdef JETCALC_HAVE_OPENMP
#include <omp.h>
#endif

namespace jetcalc {

std::optional<unsigned> ResidualReport::first_nonzero_order() const {
  if (residual.empty()) return std::nullopt;
  return residual.begin()->first;
}

DiffPoly ResidualReport::at(unsigned k) const {
  auto it = residual.find(k);
  return it == residual.end() ? DiffPoly{} : it->second;
}

int parallel_threads() {
#ifdef JETCALC_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

/// Runs task(i) for i in [0, count), serially or across OpenMP threads.
void run_tasks(std::size_t count, Execution exec, const std::function<void(std::size_t)>& task) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::exception_ptr error;
#ifdef JETCALC_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      task(static_cast<std::size_t>(i));
    } catch (...) {
#ifdef JETCALC_HAVE_OPENMP
#pragma omp critical(jetcalc_task_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

struct Component {
  unsigned order;
  DiffPoly poly;
  std::vector<DiffPoly> tower;  // tower[i] = Dx^i poly
};

std::vector<Component> components_of(const EpsSeries& s, unsigned n) {
  std::vector<Component> out;
  for (const auto& [k, p] : s.components()) {
    if (k <= n) out.push_back(Component{k, p, {}});
  }
  return out;
}

unsigned max_jet_of(const std::vector<Component>& cs) {
  unsigned j = 0;
  for (const auto& c : cs) j = std::max(j, c.poly.max_jet());
  return j;
}

void build_towers(std::vector<Component>& cs, unsigned height, unsigned max_jet, Execution exec) {
  run_tasks(cs.size(), exec, [&](std::size_t i) {
    auto& c = cs[i];
    c.tower.clear();
    c.tower.push_back(c.poly);
    for (unsigned h = 1; h <= height; ++h) c.tower.push_back(total_x_derivative(c.tower.back(), max_jet));
  });
}

struct Pair {
  std::size_t a;
  std::size_t b;
};

ResidualReport assemble(unsigned n, const std::vector<Component>& ca, const std::vector<Component>& cb,
                        const std::vector<Pair>& pairs, std::vector<DiffPoly>& results) {
  ResidualReport report;
  report.truncation = n;
  std::map<unsigned, DiffPoly> acc;
  for (std::size_t i = 0; i < pairs.size(); ++i) acc[ca[pairs[i].a].order + cb[pairs[i].b].order] += results[i];
  for (auto& [k, p] : acc) {
    if (!p.is_zero()) report.residual.emplace(k, std::move(p));
  }
  return report;
}

std::vector<Pair> pairs_up_to(unsigned n, const std::vector<Component>& ca, const std::vector<Component>& cb) {
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < ca.size(); ++a) {
    for (std::size_t b = 0; b < cb.size(); ++b) {
      if (ca[a].order + cb[b].order <= n) pairs.push_back(Pair{a, b});
    }
  }
  return pairs;
}

}  // namespace

DiffPoly al_bracket_component(const DiffPoly& alpha, const DiffPoly& beta, unsigned max_jet) {
  DiffPoly out;
  unsigned ja = alpha.max_jet();
  unsigned jb = beta.max_jet();
  DiffPoly db = total_x_derivative(beta, max_jet);
  for (unsigned j = 0; j <= ja; ++j) {
    DiffPoly pa = partial(alpha, j);
    if (!pa.is_zero()) out += db * pa;
    if (j < ja) db = total_x_derivative(db, max_jet);
  }
  DiffPoly da = total_x_derivative(alpha, max_jet);
  for (unsigned j = 0; j <= jb; ++j) {
    DiffPoly pb = partial(beta, j);
    if (!pb.is_zero()) out -= da * pb;
    if (j < jb) da = total_x_derivative(da, max_jet);
  }
  return out;
}

ResidualReport al_bracket(const EpsSeries& alpha, const EpsSeries& beta, unsigned n, Execution exec) {
  auto ca = components_of(alpha, n);
  auto cb = components_of(beta, n);
  unsigned ja = max_jet_of(ca);
  unsigned jb = max_jet_of(cb);
  unsigned bound = ja + jb + 2;
  build_towers(ca, jb + 1, bound, exec);
  build_towers(cb, ja + 1, bound, exec);
  auto pairs = pairs_up_to(n, ca, cb);
  std::vector<DiffPoly> results(pairs.size());
  run_tasks(pairs.size(), exec, [&](std::size_t i) {
    const Component& a = ca[pairs[i].a];
    const Component& b = cb[pairs[i].b];
    DiffPoly out;
    for (unsigned j = 0; j <= a.poly.max_jet(); ++j) {
      DiffPoly pa = partial(a.poly, j);
      if (!pa.is_zero()) out += b.tower[j + 1] * pa;
    }
    for (unsigned j = 0; j <= b.poly.max_jet(); ++j) {
      DiffPoly pb = partial(b.poly, j);
      if (!pb.is_zero()) out -= a.tower[j + 1] * pb;
    }
    results[i] = std::move(out);
  });
  return assemble(n, ca, cb, pairs, results);
}

DiffPoly al_bracket_order(const EpsSeries& alpha, const EpsSeries& beta, unsigned k, Execution exec) {
  std::vector<std::pair<const DiffPoly*, const DiffPoly*>> pairs;
  for (const auto& [a, pa] : alpha.components()) {
    if (a > k) break;
    auto it = beta.components().find(k - a);
    if (it != beta.components().end()) pairs.emplace_back(&pa, &it->second);
  }
  std::vector<DiffPoly> results(pairs.size());
  run_tasks(pairs.size(), exec, [&](std::size_t i) {
    const DiffPoly& a = *pairs[i].first;
    const DiffPoly& b = *pairs[i].second;
    results[i] = al_bracket_component(a, b, a.max_jet() + b.max_jet() + 2);
  });
  DiffPoly out;
  for (auto& r : results) out += r;
  return out;
}

ResidualReport evolutionary_commutator(const EpsSeries& x, const EpsSeries& y, unsigned n, Execution exec) {
  auto cx = components_of(x, n);
  auto cy = components_of(y, n);
  unsigned jx = max_jet_of(cx);
  unsigned jy = max_jet_of(cy);
  unsigned bound = jx + jy + 2;
  build_towers(cx, jy, bound, exec);
  build_towers(cy, jx, bound, exec);
  auto pairs = pairs_up_to(n, cx, cy);
  std::vector<DiffPoly> results(pairs.size());
  run_tasks(pairs.size(), exec, [&](std::size_t i) {
    const Component& a = cx[pairs[i].a];
    const Component& b = cy[pairs[i].b];
    DiffPoly out;
    for (unsigned j = 0; j <= b.poly.max_jet(); ++j) {
      DiffPoly pb = partial(b.poly, j);
      if (!pb.is_zero()) out += a.tower[j] * pb;
    }
    for (unsigned j = 0; j <= a.poly.max_jet(); ++j) {
      DiffPoly pa = partial(a.poly, j);
      if (!pa.is_zero()) out -= b.tower[j] * pa;
    }
    results[i] = std::move(out);
  });
  return assemble(n, cx, cy, pairs, results);
}

}  // namespace jetcalc
