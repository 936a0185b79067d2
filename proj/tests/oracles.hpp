#pragma once

// Brute-force references used only by the tests. Each one recomputes a
// library result by a different, slower route.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "dcat/fincat.hpp"
#include "dcat/prof.hpp"

namespace oracle {

using namespace dcat;

/// Every arrow map A -> M that is a functor, found by trying all |M|^|A| maps.
inline std::vector<std::vector<ArrowId>> functor_arrow_maps(const FinCategory& a,
                                                            const FinCategory& m) {
  std::vector<std::vector<ArrowId>> out;
  const auto na = a.num_arrows();
  const auto nm = m.num_arrows();
  if (na == 0) return {{}};
  if (nm == 0) return out;
  std::vector<ArrowId> map(na, 0);
  while (true) {
    bool ok = true;
    for (std::size_t x = 0; x < a.num_objects() && ok; ++x) {
      ok = m.is_identity(map[a.identity(static_cast<ObjectId>(x))]);
    }
    for (std::size_t f = 0; f < na && ok; ++f) {
      const auto sf = a.identity(a.source(static_cast<ArrowId>(f)));
      const auto tf = a.identity(a.target(static_cast<ArrowId>(f)));
      ok = m.source(map[f]) == m.source(map[sf]) && m.target(map[f]) == m.source(map[tf]);
    }
    for (std::size_t f = 0; f < na && ok; ++f) {
      for (std::size_t g = 0; g < na && ok; ++g) {
        const auto gf = a.compose(static_cast<ArrowId>(g), static_cast<ArrowId>(f));
        if (gf == kNone) continue;
        ok = m.compose(map[g], map[f]) == map[gf];
      }
    }
    if (ok) out.push_back(map);
    std::size_t i = 0;
    while (i < na && ++map[i] == static_cast<ArrowId>(nm)) map[i++] = 0;
    if (i == na) break;
  }
  return out;
}

/// Connected components by repeated relabelling.
inline std::size_t components(const FinCategory& c) {
  std::vector<std::size_t> label(c.num_objects());
  std::iota(label.begin(), label.end(), std::size_t{0});
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& f : c.arrows()) {
      const auto m = std::min(label[f.source], label[f.target]);
      for (auto x : {f.source, f.target}) {
        if (label[x] != m) {
          label[x] = m;
          changed = true;
        }
      }
    }
  }
  return std::set<std::size_t>(label.begin(), label.end()).size();
}

/// All cones over d with any apex: legs chosen freely, kept when natural.
inline std::vector<Cone> all_cones(const Functor& d) {
  const auto& i = *d.source;
  const auto& m = *d.target;
  std::vector<Cone> out;
  for (std::size_t apex = 0; apex < m.num_objects(); ++apex) {
    std::vector<std::vector<ArrowId>> choices;
    for (std::size_t x = 0; x < i.num_objects(); ++x) {
      std::vector<ArrowId> c;
      for (std::size_t f = 0; f < m.num_arrows(); ++f) {
        if (m.source(static_cast<ArrowId>(f)) == static_cast<ObjectId>(apex) &&
            m.target(static_cast<ArrowId>(f)) == d.obj(static_cast<ObjectId>(x))) {
          c.push_back(static_cast<ArrowId>(f));
        }
      }
      choices.push_back(c);
    }
    std::vector<ArrowId> legs;
    std::function<void(std::size_t)> rec = [&](std::size_t x) {
      if (x == choices.size()) {
        bool natural = true;
        for (std::size_t v = 0; v < i.num_arrows() && natural; ++v) {
          const auto s = i.source(static_cast<ArrowId>(v));
          const auto t = i.target(static_cast<ArrowId>(v));
          natural = m.compose(d.arr(static_cast<ArrowId>(v)), legs[s]) == legs[t];
        }
        if (natural) out.push_back(Cone{static_cast<ObjectId>(apex), legs});
        return;
      }
      for (auto f : choices[x]) {
        legs.push_back(f);
        rec(x + 1);
        legs.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

/// The least cone through which every cone factors exactly once.
inline std::optional<Cone> naive_limit(const Functor& d) {
  const auto& m = *d.target;
  const auto cones = all_cones(d);
  std::vector<Cone> terminal;
  for (const auto& l : cones) {
    bool universal = true;
    for (const auto& c : cones) {
      std::size_t n = 0;
      for (std::size_t h = 0; h < m.num_arrows(); ++h) {
        const auto hh = static_cast<ArrowId>(h);
        if (m.source(hh) != c.apex || m.target(hh) != l.apex) continue;
        bool match = true;
        for (std::size_t x = 0; x < l.legs.size() && match; ++x) {
          match = m.compose(l.legs[x], hh) == c.legs[x];
        }
        if (match) ++n;
      }
      if (n != 1) {
        universal = false;
        break;
      }
    }
    if (universal) terminal.push_back(l);
  }
  if (terminal.empty()) return std::nullopt;
  return *std::min_element(terminal.begin(), terminal.end(), [](const Cone& x, const Cone& y) {
    return std::tie(x.apex, x.legs) < std::tie(y.apex, y.legs);
  });
}

/// Classes of composable pairs under the generating relation, by
/// breadth-first search from each pair.
inline std::vector<std::set<std::pair<ElemId, ElemId>>> coend_classes(const Profunctor& j,
                                                                      const Profunctor& h) {
  const auto& b = *j.target();
  std::set<std::pair<ElemId, ElemId>> seen;
  std::vector<std::set<std::pair<ElemId, ElemId>>> out;
  auto neighbours = [&](std::pair<ElemId, ElemId> p) {
    std::vector<std::pair<ElemId, ElemId>> n;
    // (v . x, y) ~ (x, y . v)
    for (std::size_t x = 0; x < j.num_elements(); ++x) {
      for (std::size_t y = 0; y < h.num_elements(); ++y) {
        for (std::size_t v = 0; v < b.num_arrows(); ++v) {
          const auto vv = static_cast<ArrowId>(v);
          const auto xx = static_cast<ElemId>(x);
          const auto yy = static_cast<ElemId>(y);
          if (j.element(xx).b != b.source(vv) || h.element(yy).a != b.target(vv)) continue;
          const std::pair<ElemId, ElemId> l{j.right(vv, xx), yy};
          const std::pair<ElemId, ElemId> r{xx, h.left(vv, yy)};
          if (l == p) n.push_back(r);
          if (r == p) n.push_back(l);
        }
      }
    }
    return n;
  };
  for (std::size_t x = 0; x < j.num_elements(); ++x) {
    for (std::size_t y = 0; y < h.num_elements(); ++y) {
      const std::pair<ElemId, ElemId> start{static_cast<ElemId>(x), static_cast<ElemId>(y)};
      if (j.element(start.first).b != h.element(start.second).a || seen.count(start)) continue;
      std::set<std::pair<ElemId, ElemId>> cls{start};
      std::vector<std::pair<ElemId, ElemId>> queue{start};
      while (!queue.empty()) {
        const auto p = queue.back();
        queue.pop_back();
        for (const auto& q : neighbours(p)) {
          if (cls.insert(q).second) queue.push_back(q);
        }
      }
      seen.insert(cls.begin(), cls.end());
      out.push_back(cls);
    }
  }
  return out;
}

/// Count of natural cells J => K over (f, g), by trying every element map.
inline std::size_t count_cells(const Profunctor& j, const Profunctor& k, const Functor& f,
                               const Functor& g) {
  std::vector<std::vector<ElemId>> choices;
  for (std::size_t x = 0; x < j.num_elements(); ++x) {
    const auto& e = j.element(static_cast<ElemId>(x));
    const auto fib = k.fiber(f.obj(e.a), g.obj(e.b));
    choices.emplace_back(fib.begin(), fib.end());
  }
  std::size_t n = 0;
  std::vector<ElemId> map;
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == choices.size()) {
      const auto& a = *j.source();
      const auto& b = *j.target();
      for (std::size_t y = 0; y < j.num_elements(); ++y) {
        const auto yy = static_cast<ElemId>(y);
        const auto& e = j.element(yy);
        for (auto u : a.arrows_into(e.a)) {
          for (auto v : b.arrows_from(e.b)) {
            if (map[j.act(u, yy, v)] != k.act(f.arr(u), map[y], g.arr(v))) return;
          }
        }
      }
      ++n;
      return;
    }
    for (auto y : choices[x]) {
      map.push_back(y);
      rec(x + 1);
      map.pop_back();
    }
  };
  rec(0);
  return n;
}

/// Whether some fibrewise bijection J -> K commutes with the actions.
inline bool isomorphic(const Profunctor& j, const Profunctor& k) {
  if (!same_category(j.source(), k.source()) || !same_category(j.target(), k.target())) return false;
  if (j.num_elements() != k.num_elements()) return false;
  std::vector<ElemId> map(j.num_elements(), kNone);
  std::vector<bool> used(k.num_elements(), false);
  const auto& a = *j.source();
  const auto& b = *j.target();
  std::function<bool(std::size_t)> rec = [&](std::size_t x) {
    if (x == j.num_elements()) {
      for (std::size_t y = 0; y < j.num_elements(); ++y) {
        const auto yy = static_cast<ElemId>(y);
        const auto& e = j.element(yy);
        for (auto u : a.arrows_into(e.a)) {
          for (auto v : b.arrows_from(e.b)) {
            if (map[j.act(u, yy, v)] != k.act(u, map[y], v)) return false;
          }
        }
      }
      return true;
    }
    const auto& e = j.element(static_cast<ElemId>(x));
    for (auto y : k.fiber(e.a, e.b)) {
      if (used[y]) continue;
      used[y] = true;
      map[x] = y;
      if (rec(x + 1)) return true;
      used[y] = false;
    }
    return false;
  };
  for (std::size_t x = 0; x < a.num_objects(); ++x) {
    for (std::size_t y = 0; y < b.num_objects(); ++y) {
      if (j.fiber(static_cast<ObjectId>(x), static_cast<ObjectId>(y)).size() !=
          k.fiber(static_cast<ObjectId>(x), static_cast<ObjectId>(y)).size()) {
        return false;
      }
    }
  }
  return rec(0);
}

/// Whether (apex, legs) is the J(a, -)-weighted limit of d, where legs[i] is
/// the leg at the i-th element of J.from(a): for every stage m the map
/// u |-> (legs . u) is a bijection from M(m, apex) onto the natural families.
inline bool is_weighted_limit(const Profunctor& j, ObjectId a, const Functor& d, ObjectId apex,
                              const std::vector<ArrowId>& legs) {
  const auto& m = *d.target;
  const auto& b = *j.target();
  const auto from = j.from(a);
  std::vector<ElemId> elems(from.begin(), from.end());
  auto pos = [&](ElemId e) {
    return static_cast<std::size_t>(std::find(elems.begin(), elems.end(), e) - elems.begin());
  };
  for (std::size_t st = 0; st < m.num_objects(); ++st) {
    const auto stage = static_cast<ObjectId>(st);
    std::set<std::vector<ArrowId>> families;
    std::vector<ArrowId> fam;
    std::function<void(std::size_t)> rec = [&](std::size_t x) {
      if (x == elems.size()) {
        for (std::size_t y = 0; y < elems.size(); ++y) {
          for (auto v : b.arrows_from(j.element(elems[y]).b)) {
            if (m.compose(d.arr(v), fam[y]) != fam[pos(j.right(v, elems[y]))]) return;
          }
        }
        families.insert(fam);
        return;
      }
      for (auto u : m.hom(stage, d.obj(j.element(elems[x]).b))) {
        fam.push_back(u);
        rec(x + 1);
        fam.pop_back();
      }
    };
    rec(0);
    std::set<std::vector<ArrowId>> images;
    for (auto u : m.hom(stage, apex)) {
      std::vector<ArrowId> f;
      for (auto l : legs) f.push_back(m.compose(l, u));
      if (!families.count(f) || !images.insert(f).second) return false;
    }
    if (images.size() != families.size()) return false;
  }
  return true;
}

}  // namespace oracle
