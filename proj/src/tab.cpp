#include "dcat/tab.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "dcat/corpus.hpp"
#include "dcat/parallel.hpp"
#include "detail.hpp"

namespace dcat {

Tabulation tabulate(const ProfPtr& jp) {
  const auto& j = *jp;
  const auto& a = *j.source();
  const auto& b = *j.target();
  const auto n = j.num_elements();
  std::vector<std::string> names;
  for (std::size_t x = 0; x < n; ++x) {
    const auto& e = j.element(static_cast<ElemId>(x));
    names.push_back("(" + a.object_name(e.a) + "," + e.name + "," + b.object_name(e.b) + ")");
  }
  struct Mor {
    ObjectId s, t;
    ArrowId u, v;
  };
  std::vector<Mor> mors;
  std::vector<ArrowId> identities(n, kNone);
  std::map<std::tuple<ObjectId, ObjectId, ArrowId, ArrowId>, ArrowId> index;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const auto& x = j.element(static_cast<ElemId>(s));
      const auto& y = j.element(static_cast<ElemId>(t));
      for (auto u : a.hom(x.a, y.a)) {
        for (auto v : b.hom(x.b, y.b)) {
          if (j.left(u, static_cast<ElemId>(t)) != j.right(v, static_cast<ElemId>(s))) continue;
          const auto id = static_cast<ArrowId>(mors.size());
          if (s == t && a.is_identity(u) && b.is_identity(v)) identities[s] = id;
          index[{static_cast<ObjectId>(s), static_cast<ObjectId>(t), u, v}] = id;
          mors.push_back({static_cast<ObjectId>(s), static_cast<ObjectId>(t), u, v});
        }
      }
    }
  }
  std::vector<std::string> arrow_names;
  for (std::size_t i = 0; i < mors.size(); ++i) {
    const auto& m = mors[i];
    arrow_names.push_back(identities[m.s] == static_cast<ArrowId>(i)
                              ? "1_" + names[m.s]
                              : "(" + a.arrow(m.u).name + "," + b.arrow(m.v).name + ")");
  }
  detail::make_unique_names(arrow_names);
  std::vector<FinCategory::Arrow> arrows;
  for (std::size_t i = 0; i < mors.size(); ++i) arrows.push_back({arrow_names[i], mors[i].s, mors[i].t});
  const auto nm = mors.size();
  std::vector<ArrowId> table(nm * nm, kNone);
  for (std::size_t gi = 0; gi < nm; ++gi) {
    for (std::size_t fi = 0; fi < nm; ++fi) {
      const auto& f = mors[fi];
      const auto& g = mors[gi];
      if (f.t != g.s) continue;
      table[gi * nm + fi] = index.at({f.s, g.t, a.compose(g.u, f.u), b.compose(g.v, f.v)});
    }
  }
  Tabulation t;
  t.of = jp;
  t.total = std::make_shared<const FinCategory>("<" + j.name() + ">", names, std::move(arrows),
                                                std::move(identities), std::move(table));
  t.proj_a = Functor{t.total, j.source(), {}, {}, "pi_A"};
  t.proj_b = Functor{t.total, j.target(), {}, {}, "pi_B"};
  for (std::size_t x = 0; x < n; ++x) {
    t.element_of.push_back(static_cast<ElemId>(x));
    t.proj_a.on_objects.push_back(j.element(static_cast<ElemId>(x)).a);
    t.proj_b.on_objects.push_back(j.element(static_cast<ElemId>(x)).b);
  }
  t.pi = Cell{hom_profunctor(t.total), jp, t.proj_a, t.proj_b, {}, "pi"};
  for (const auto& m : mors) {
    t.arrow_pair.emplace_back(m.u, m.v);
    t.proj_a.on_arrows.push_back(m.u);
    t.proj_b.on_arrows.push_back(m.v);
    t.pi.map.push_back(j.left(m.u, static_cast<ElemId>(m.t)));
  }
  t.pi.left = t.proj_a;
  t.pi.right = t.proj_b;
  return t;
}

namespace {

template <class... V>
std::vector<std::int32_t> key_of(const V&... parts) {
  std::vector<std::int32_t> k;
  (k.insert(k.end(), parts.begin(), parts.end()), ...);
  return k;
}

std::string elements_label(const Profunctor& p, const std::vector<ElemId>& map) {
  std::string s = "[";
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (i) s += ",";
    s += p.element(map[i]).name;
  }
  return s + "]";
}

}  // namespace

TabulationReport verify_tabulation(const Tabulation& t, const std::vector<CatPtr>& probes) {
  TabulationReport rep;
  const auto& j = *t.of;
  const auto homa = hom_profunctor(j.source());
  const auto homb = hom_profunctor(j.target());

  struct OneDim {
    std::size_t cells = 0;
    std::string witness;
  };
  const auto one = parallel::map_indexed(probes.size(), [&](std::size_t i) {
    const auto& x = probes[i];
    const auto homx = hom_profunctor(x);
    OneDim o;
    std::map<std::vector<std::int32_t>, std::size_t> hits;
    std::map<std::vector<std::int32_t>, std::string> labels;
    const auto fa = all_functors(x, j.source());
    const auto fb = all_functors(x, j.target());
    for (const auto& f : fa) {
      for (const auto& g : fb) {
        for (const auto& phi : all_cells(homx, t.of, f, g)) {
          auto k = key_of(f.on_objects, f.on_arrows, g.on_objects, g.on_arrows, phi.map);
          hits[k] = 0;
          labels[k] = elements_label(j, phi.map);
          ++o.cells;
        }
      }
    }
    for (const auto& p : all_functors(x, t.total)) {
      const auto pa = compose(t.proj_a, p);
      const auto pb = compose(t.proj_b, p);
      std::vector<ElemId> cell;
      for (auto u : p.on_arrows) cell.push_back(t.pi.map[u]);
      auto k = key_of(pa.on_objects, pa.on_arrows, pb.on_objects, pb.on_arrows, cell);
      auto it = hits.find(k);
      if (it == hits.end()) {
        if (o.witness.empty()) o.witness = "X=" + x->name() + ": functor into <J> outside the cells";
        continue;
      }
      ++it->second;
    }
    for (const auto& [k, n] : hits) {
      if (n != 1 && o.witness.empty()) {
        o.witness = "X=" + x->name() + ": cell " + labels[k] + " has " + std::to_string(n) +
                    " factorisations";
      }
    }
    return o;
  });
  for (std::size_t i = 0; i < probes.size(); ++i) {
    rep.cells_one += one[i].cells;
    if (!one[i].witness.empty() && rep.one_dimensional) {
      rep.one_dimensional = false;
      rep.witness = one[i].witness;
    }
  }

  // 2-dimensional property, H in {1_X, f_*, f^*}.
  struct Job {
    std::size_t x, y;
    ProfPtr h;
    std::string label;
  };
  std::vector<Job> jobs;
  for (std::size_t xi = 0; xi < probes.size(); ++xi) {
    for (std::size_t yi = 0; yi < probes.size(); ++yi) {
      const auto& x = probes[xi];
      const auto& y = probes[yi];
      if (xi == yi) jobs.push_back({xi, yi, hom_profunctor(x), "1_" + x->name()});
      for (const auto& f : all_functors(x, y)) {
        jobs.push_back({xi, yi, companion_unchecked(f).prof, "f_*"});
      }
      for (const auto& f : all_functors(y, x)) {
        jobs.push_back({xi, yi, conjoint_unchecked(f).prof, "f^*"});
      }
    }
  }
  std::vector<std::vector<Functor>> into_total;
  for (const auto& x : probes) into_total.push_back(all_functors(x, t.total));
  struct TwoDim {
    std::size_t identities = 0;
    std::string witness;
  };
  const auto two = parallel::map_indexed(jobs.size(), [&](std::size_t ji) {
    const auto& job = jobs[ji];
    const auto& h = *job.h;
    TwoDim o;
    for (const auto& phi : into_total[job.x]) {
      const auto phia = compose(t.proj_a, phi);
      const auto phib = compose(t.proj_b, phi);
      for (const auto& psi : into_total[job.y]) {
        const auto psia = compose(t.proj_a, psi);
        const auto psib = compose(t.proj_b, psi);
        std::vector<std::vector<ElemId>> xa;
        std::vector<std::vector<ElemId>> xb;
        for_each_cell_map(job.h, homa, phia, psia, [&](const auto& m) { xa.push_back(m); });
        for_each_cell_map(job.h, homb, phib, psib, [&](const auto& m) { xb.push_back(m); });
        std::map<std::vector<ElemId>, std::size_t> index_a;
        std::map<std::vector<ElemId>, std::size_t> index_b;
        for (std::size_t i = 0; i < xa.size(); ++i) index_a.emplace(xa[i], i);
        for (std::size_t i = 0; i < xb.size(); ++i) index_b.emplace(xb[i], i);
        // hits[ia * |xb| + ib]: lifts of the pair, or npos when the identity fails.
        constexpr auto npos = static_cast<std::size_t>(-1);
        std::vector<std::size_t> hits(xa.size() * xb.size(), npos);
        std::vector<ElemId> at_x(h.num_elements());
        std::vector<ElemId> at_y(h.num_elements());
        for (std::size_t e = 0; e < h.num_elements(); ++e) {
          const auto& el = h.element(static_cast<ElemId>(e));
          at_x[e] = t.pi.map[t.total->identity(phi.obj(el.a))];
          at_y[e] = t.pi.map[t.total->identity(psi.obj(el.b))];
        }
        for (std::size_t ia = 0; ia < xa.size(); ++ia) {
          for (std::size_t ib = 0; ib < xb.size(); ++ib) {
            bool holds = true;
            for (std::size_t e = 0; e < h.num_elements() && holds; ++e) {
              holds = j.right(xb[ib][e], at_x[e]) == j.left(xa[ia][e], at_y[e]);
            }
            if (holds) {
              hits[ia * xb.size() + ib] = 0;
              ++o.identities;
            }
          }
        }
        std::vector<ElemId> via_a(h.num_elements());
        std::vector<ElemId> via_b(h.num_elements());
        for_each_cell_map(job.h, t.pi.source, phi, psi, [&](const std::vector<ElemId>& m) {
          for (std::size_t e = 0; e < m.size(); ++e) {
            via_a[e] = t.proj_a.arr(m[e]);
            via_b[e] = t.proj_b.arr(m[e]);
          }
          const auto ia = index_a.find(via_a);
          const auto ib = index_b.find(via_b);
          if (ia == index_a.end() || ib == index_b.end() ||
              hits[ia->second * xb.size() + ib->second] == npos) {
            if (o.witness.empty()) o.witness = "cell into <J> violates the identity";
            return;
          }
          ++hits[ia->second * xb.size() + ib->second];
        });
        for (auto n : hits) {
          if (n != npos && n != 1 && o.witness.empty()) {
            o.witness = "X=" + probes[job.x]->name() + " Y=" + probes[job.y]->name() + " H=" +
                        job.label + ": identity with " + std::to_string(n) + " lifts";
          }
        }
      }
    }
    return o;
  });
  std::map<std::string, std::size_t> per_pair;
  for (std::size_t ji = 0; ji < jobs.size(); ++ji) {
    rep.cells_two += two[ji].identities;
    per_pair["X=" + probes[jobs[ji].x]->name() + " Y=" + probes[jobs[ji].y]->name() + " H=" +
             jobs[ji].label] += two[ji].identities;
    if (!two[ji].witness.empty() && rep.two_dimensional) {
      rep.two_dimensional = false;
      if (rep.witness.empty()) rep.witness = two[ji].witness;
    }
  }
  for (const auto& [label, n] : per_pair) {
    rep.coverage.push_back(label + ": " + std::to_string(n) + " identities");
  }
  return rep;
}

bool is_opcartesian_tabulation(const Tabulation& t) { return is_opcartesian(t.pi); }

CommaObject comma_object(const Functor& f, const Functor& g) {
  if (!same_category(f.target, g.target)) {
    throw BoundaryMismatch("comma object needs functors with a common target");
  }
  const auto res = restrict(hom_profunctor(f.target), f, g);
  CommaObject out;
  out.tabulation = tabulate(res.prof);
  const auto& t = out.tabulation;
  out.proj_a = t.proj_a;
  out.proj_b = t.proj_b;
  out.cell = vcompose(t.pi, res.cartesian);
  out.cell.name = "comma";
  const auto cm = comma_category(f, g);
  const auto& total = *t.total;
  const auto& cc = *cm.category;
  Functor cmp{t.total, cm.category, {}, {}, "cmp"};
  for (std::size_t x = 0; x < total.num_objects(); ++x) {
    const auto k = res.cartesian.map[t.element_of[x]];
    ObjectId hit = kNone;
    for (std::size_t y = 0; y < cc.num_objects(); ++y) {
      const auto oy = static_cast<ObjectId>(y);
      if (cm.proj_left.obj(oy) == t.proj_a.obj(static_cast<ObjectId>(x)) &&
          cm.proj_right.obj(oy) == t.proj_b.obj(static_cast<ObjectId>(x)) &&
          cm.cell.components[y] == k) {
        hit = oy;
      }
    }
    cmp.on_objects.push_back(hit);
  }
  for (std::size_t m = 0; m < total.num_arrows(); ++m) {
    const auto [u, v] = t.arrow_pair[m];
    ArrowId hit = kNone;
    const auto s = cmp.obj(total.source(static_cast<ArrowId>(m)));
    const auto e = cmp.obj(total.target(static_cast<ArrowId>(m)));
    if (s != kNone && e != kNone) {
      for (auto w : cc.hom(s, e)) {
        if (cm.proj_left.arr(w) == u && cm.proj_right.arr(w) == v) hit = w;
      }
    }
    cmp.on_arrows.push_back(hit);
  }
  const bool mapped = std::find(cmp.on_objects.begin(), cmp.on_objects.end(), kNone) ==
                          cmp.on_objects.end() &&
                      std::find(cmp.on_arrows.begin(), cmp.on_arrows.end(), kNone) ==
                          cmp.on_arrows.end();
  if (!mapped || !validate_functor(cmp).ok() || !is_isomorphism(cmp)) {
    throw InternalInvariant("comma object of " + f.name + " and " + g.name +
                            " is not isomorphic to the comma category");
  }
  out.comparison = std::move(cmp);
  return out;
}

bool is_ran_in_cat(const Functor& p, const Functor& d, const Functor& r, const NatTransf& sigma) {
  const auto& m = *d.target;
  const auto ss = all_functors(p.target, d.target);
  const auto ok = parallel::map_indexed(ss.size(), [&](std::size_t i) {
    const auto& s = ss[i];
    std::map<std::vector<ArrowId>, std::size_t> hits;
    for (const auto& t : all_nat_transfs(compose(s, p), d)) hits[t.components] = 0;
    for (const auto& tau : all_nat_transfs(s, r)) {
      std::vector<ArrowId> comps;
      for (std::size_t z = 0; z < p.source->num_objects(); ++z) {
        comps.push_back(m.compose(sigma.components[z], tau.components[p.obj(static_cast<ObjectId>(z))]));
      }
      auto it = hits.find(comps);
      if (it == hits.end()) return false;
      ++it->second;
    }
    for (const auto& [k, n] : hits) {
      if (n != 1) return false;
    }
    return true;
  });
  return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
}

StreetReport street_pointwise(const Functor& p, const Functor& d, const Functor& r,
                              const NatTransf& sigma, StreetProbes mode,
                              const std::vector<CatPtr>& general_probes) {
  std::vector<Functor> fs;
  if (mode == StreetProbes::objects) {
    fs = object_probes(p.target);
  } else {
    for (const auto& x : general_probes) {
      for (auto& f : all_functors(x, p.target)) fs.push_back(std::move(f));
    }
  }
  const auto& m = *d.target;
  const auto ok = parallel::map_indexed(fs.size(), [&](std::size_t i) {
    const auto& f = fs[i];
    const auto cm = comma_category(f, p);
    const auto dq = compose(d, cm.proj_right);
    const auto rf = compose(r, f);
    NatTransf s{compose(rf, cm.proj_left), dq, {}};
    for (std::size_t z = 0; z < cm.category->num_objects(); ++z) {
      const auto y = cm.proj_right.obj(static_cast<ObjectId>(z));
      s.components.push_back(m.compose(sigma.components[y], r.arr(cm.cell.components[z])));
    }
    return is_ran_in_cat(cm.proj_left, dq, rf, s);
  });
  StreetReport rep;
  rep.probes_checked = fs.size();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!ok[i] && rep.pointwise) {
      rep.pointwise = false;
      rep.witness = "restriction to " + fs[i].name + "/p is not a right Kan extension";
    }
  }
  return rep;
}

Cell tab_prime(const Tabulation& t) {
  const auto pa = conjoint_unchecked(t.proj_a);
  const auto& j = *t.of;
  Cell c{pa.prof, t.of, identity_functor(j.source()), t.proj_b, {}, "tab'"};
  for (std::size_t e = 0; e < pa.prof->num_elements(); ++e) {
    const auto x = pa.prof->element(static_cast<ElemId>(e)).b;
    c.map.push_back(j.left(pa.arrows[e], t.element_of[x]));
  }
  return c;
}

TabRanReport ran_via_tabulation(const RanCandidate& c, const Functor* conjoint_of,
                                StreetProbes mode, const std::vector<CatPtr>& general_probes) {
  TabRanReport rep;
  rep.pointwise = is_pointwise_ran(c);
  const auto t = tabulate(c.along);
  const auto full = vcompose(t.pi, c.counit);
  NatTransf sigma{full.left, full.right, {}};
  for (std::size_t x = 0; x < t.total->num_objects(); ++x) {
    sigma.components.push_back(full.map[t.total->identity(static_cast<ObjectId>(x))]);
  }
  const auto dpb = compose(c.of, t.proj_b);
  rep.street = street_pointwise(t.proj_a, dpb, c.extension, sigma, mode, general_probes).pointwise;
  const auto tp = tab_prime(t);
  rep.tab_prime_opcartesian = is_opcartesian(tp);
  rep.tab_prime_pointwise = is_pointwise_ran(RanCandidate{tp.source, dpb, c.extension,
                                                          vcompose(tp, c.counit)});
  if (conjoint_of) {
    const auto js = conjoint_unchecked(*conjoint_of);
    if (!same_prof(js.prof, c.along)) {
      throw BoundaryMismatch("ran_via_tabulation: J is not the conjoint of " + conjoint_of->name);
    }
    const auto s = vcompose(Cell{js.eta.source, c.along, js.eta.left, js.eta.right, js.eta.map, {}},
                            c.counit);
    NatTransf sj{s.left, s.right, {}};
    for (std::size_t b = 0; b < conjoint_of->source->num_objects(); ++b) {
      sj.components.push_back(s.map[conjoint_of->source->identity(static_cast<ObjectId>(b))]);
    }
    rep.conjoint_pointwise = rep.pointwise;
    rep.conjoint_street = street_pointwise(*conjoint_of, c.of, c.extension, sj, mode,
                                           general_probes).pointwise;
  }
  return rep;
}

}  // namespace dcat
