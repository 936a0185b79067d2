#include "dcat/laws.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "dcat/corpus.hpp"
#include "dcat/dsl.hpp"
#include "dcat/kan.hpp"
#include "dcat/parallel.hpp"
#include "dcat/spanfin.hpp"
#include "dcat/tab.hpp"

namespace dcat::laws {

namespace {

struct Tally {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string witness;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    ++failures;
    if (witness.empty()) witness = what;
  }
  void merge(const Tally& t) {
    checked += t.checked;
    failures += t.failures;
    if (witness.empty()) witness = t.witness;
  }
};

template <class F>
Tally over(std::size_t n, F&& f) {
  const auto parts = parallel::map_indexed(n, [&](std::size_t i) {
    Tally t;
    try {
      f(i, t);
    } catch (const Error& e) {
      t.expect(false, std::string("exception: ") + e.what());
    }
    return t;
  });
  Tally out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ull ^ (a + 0x632BE59BD9B4E019ull) * 0xBF58476D1CE4E5B9ull;
  x ^= (b + 1) * 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

template <class T>
std::vector<T> take(const std::vector<T>& v, std::size_t n, std::uint64_t seed) {
  return sample(v, n, seed);
}

std::vector<Functor> functors(const CatPtr& a, const CatPtr& b, std::size_t n, std::uint64_t seed) {
  return take(all_functors(a, b), n, seed);
}

std::string nm(const ProfPtr& p) {
  return p->name() + ": " + p->source()->name() + " -/-> " + p->target()->name();
}

constexpr std::size_t kAll = static_cast<std::size_t>(-1);

/// Index triples (i, j, k) over the corpus, sampled.
std::vector<std::array<std::size_t, 3>> triples(const Corpus& c, std::size_t n,
                                                std::uint64_t seed) {
  std::vector<std::array<std::size_t, 3>> all;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      for (std::size_t k = 0; k < c.size(); ++k) all.push_back({i, j, k});
  return n >= all.size() ? all : take(all, n, seed);
}

std::vector<std::array<std::size_t, 2>> pairs(const Corpus& c, std::size_t n, std::uint64_t seed) {
  std::vector<std::array<std::size_t, 2>> all;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) all.push_back({i, j});
  return take(all, n, seed);
}

// --- 1 -----------------------------------------------------------------------

Tally double_category_laws(const Corpus& c, const Config& cfg) {
  const auto ts = triples(c, kAll, 0);
  Tally t = over(ts.size(), [&](std::size_t n, Tally& t) {
    const auto [i, j, k] = ts[n];
    const auto& a = c.categories[i];
    const auto& b = c.categories[j];
    const auto& e = c.categories[k];
    const auto jab = take(c.between(i, j), 2, mix(cfg.seed, n, 1));
    const auto hbe = take(c.between(j, k), 2, mix(cfg.seed, n, 2));
    const auto fs = functors(a, a, 2, mix(cfg.seed, n, 3));
    const auto gs = functors(b, b, 2, mix(cfg.seed, n, 4));
    const auto hs = functors(e, e, 2, mix(cfg.seed, n, 5));
    const auto ida = identity_functor(a);
    const auto idb = identity_functor(b);
    const auto ide = identity_functor(e);
    for (const auto& j1 : jab) {
      for (const auto& j2 : jab) {
        for (const auto& h1 : hbe) {
          for (const auto& h2 : hbe) {
            for (const auto& f : fs) {
              for (const auto& g : gs) {
                for (const auto& h : hs) {
                  const auto phis = take(all_cells(j1, j2, f, g), 2, mix(cfg.seed, n, 6));
                  const auto chis = take(all_cells(h1, h2, g, h), 2, mix(cfg.seed, n, 7));
                  const auto phis2 = take(all_cells(j2, j1, ida, idb), 1, mix(cfg.seed, n, 8));
                  const auto chis2 = take(all_cells(h2, h1, idb, ide), 1, mix(cfg.seed, n, 9));
                  for (const auto& phi : phis) {
                    t.expect(vcompose(identity_cell(j1), phi) == phi &&
                                 vcompose(phi, identity_cell(j2)) == phi,
                             "vertical unit law at " + nm(j1));
                    t.expect(vcompose(hcompose(unit_cell(f), phi), left_unitor(j2)) ==
                                     vcompose(left_unitor(j1), phi) &&
                                 vcompose(hcompose(phi, unit_cell(g)), right_unitor(j2)) ==
                                     vcompose(right_unitor(j1), phi),
                             "horizontal unit law at " + nm(j1));
                    for (const auto& chi : chis) {
                      for (const auto& phi2 : phis2) {
                        for (const auto& chi2 : chis2) {
                          // phi2 and chi2 have identity boundaries on top of (f, g, h).
                          const auto lhs = vcompose(hcompose(phi2, chi2), hcompose(phi, chi));
                          const auto rhs =
                              hcompose(vcompose(phi2, phi), vcompose(chi2, chi));
                          t.expect(lhs == rhs, "interchange at " + nm(j1) + ", " + nm(h1));
                        }
                      }
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  });
  // Pentagon and triangle.
  std::vector<std::array<std::size_t, 5>> chains;
  {
    std::mt19937_64 rng(mix(cfg.seed, 11));
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    for (int n = 0; n < 400; ++n) chains.push_back({pick(rng), pick(rng), pick(rng), pick(rng), pick(rng)});
  }
  t.merge(over(chains.size(), [&](std::size_t n, Tally& t) {
    const auto& ch = chains[n];
    const auto& pj = c.between(ch[0], ch[1]);
    const auto& ph = c.between(ch[1], ch[2]);
    const auto& pk = c.between(ch[2], ch[3]);
    const auto& pl = c.between(ch[3], ch[4]);
    if (pj.empty() || ph.empty() || pk.empty() || pl.empty()) return;
    const auto& j = pj[n % pj.size()];
    const auto& h = ph[(n / 2) % ph.size()];
    const auto& k = pk[(n / 3) % pk.size()];
    const auto& l = pl[(n / 5) % pl.size()];
    const auto hk = compose_prof(h, k).prof;
    const auto jh = compose_prof(j, h).prof;
    const auto kl = compose_prof(k, l).prof;
    const auto p1 = vcompose(vcompose(hcompose(associator(j, h, k), identity_cell(l)),
                                      associator(j, hk, l)),
                             hcompose(identity_cell(j), associator(h, k, l)));
    const auto p2 = vcompose(associator(jh, k, l), associator(j, h, kl));
    t.expect(p1 == p2, "pentagon at " + nm(j) + ", " + nm(h) + ", " + nm(k) + ", " + nm(l));
    const auto unit = hom_profunctor(c.categories[ch[1]]);
    const auto tri1 =
        vcompose(associator(j, unit, h), hcompose(identity_cell(j), left_unitor(h)));
    const auto tri2 = hcompose(right_unitor(j), identity_cell(h));
    t.expect(tri1 == tri2, "triangle at " + nm(j) + ", " + nm(h));
    t.expect(vcompose(associator(j, h, k), associator_inv(j, h, k)) ==
                 identity_cell(compose_prof(jh, k).prof),
             "associator inverse at " + nm(j));
  }));
  return t;
}

// --- 2 -----------------------------------------------------------------------

Tally companions_and_restriction(const Corpus& c, const Config& cfg) {
  const auto ps = pairs(c, c.size() * c.size(), 0);
  Tally t = over(ps.size(), [&](std::size_t n, Tally& t) {
    const auto [i, j] = ps[n];
    for (const auto& f : all_functors(c.categories[i], c.categories[j])) {
      const auto cc = check_companion(f, companion_unchecked(f));
      t.expect(cc.vertical && cc.horizontal, "companion identities of " + f.name);
      const auto cj = check_conjoint(f, conjoint_unchecked(f));
      t.expect(cj.vertical && cj.horizontal, "conjoint identities of " + f.name);
    }
  });
  std::vector<std::array<std::size_t, 4>> quads;
  {
    std::mt19937_64 rng(mix(cfg.seed, 21));
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    for (int n = 0; n < 20000; ++n) quads.push_back({pick(rng), pick(rng), pick(rng), pick(rng)});
  }
  t.merge(over(quads.size(), [&](std::size_t n, Tally& t) {
    const auto [ia, ib, ic, id] = quads[n];
    const auto& a = c.categories[ia];
    const auto& b = c.categories[ib];
    const auto& cc = c.categories[ic];
    const auto& d = c.categories[id];
    for (const auto& k : c.between(ic, id)) {
      for (const auto& f : functors(a, cc, 2, mix(cfg.seed, n, 2))) {
        for (const auto& g : functors(b, d, 2, mix(cfg.seed, n, 3))) {
          const auto r = restrict(k, f, g);
          const auto fc = companion_unchecked(f);
          const auto gc = conjoint_unchecked(g);
          const auto inner = compose_prof(k, gc.prof);
          const auto outer = compose_prof(fc.prof, inner.prof);
          const auto& rp = *r.prof;
          std::vector<ElemId> image(rp.num_elements());
          std::vector<char> hit(outer.prof->num_elements(), 0);
          bool ok = rp.num_elements() == outer.prof->num_elements();
          for (std::size_t x = 0; x < rp.num_elements() && ok; ++x) {
            const auto& el = rp.element(static_cast<ElemId>(x));
            const auto kx = r.cartesian.map[x];
            const auto right = gc.element(d->identity(g.obj(el.b)), el.b);
            const auto left = fc.element(el.a, cc->identity(f.obj(el.a)));
            const auto y = outer.cls(left, inner.cls(kx, right));
            ok = y != kNone && !hit[y];
            if (ok) hit[y] = 1;
            image[x] = y;
          }
          for (std::size_t x = 0; x < rp.num_elements() && ok; ++x) {
            const auto& el = rp.element(static_cast<ElemId>(x));
            for (auto u : a->arrows_into(el.a)) {
              for (auto v : b->arrows_from(el.b)) {
                ok = ok && image[rp.act(u, static_cast<ElemId>(x), v)] ==
                               outer.prof->act(u, image[x], v);
              }
            }
          }
          t.expect(ok, "restriction formula at " + nm(k) + " along " + f.name + ", " + g.name);
        }
      }
    }
  }));
  return t;
}

// --- 3 -----------------------------------------------------------------------

/// Classes of composable pairs by repeated relaxation of labels to a fixed point.
std::vector<std::size_t> closure_classes(const Profunctor& j, const Profunctor& h,
                                         std::vector<std::pair<ElemId, ElemId>>& pairs_out) {
  const auto& b = *j.target();
  std::map<std::pair<ElemId, ElemId>, std::size_t> index;
  for (std::size_t x = 0; x < j.num_elements(); ++x) {
    for (std::size_t y = 0; y < h.num_elements(); ++y) {
      if (j.element(static_cast<ElemId>(x)).b == h.element(static_cast<ElemId>(y)).a) {
        index.emplace(std::pair{static_cast<ElemId>(x), static_cast<ElemId>(y)}, pairs_out.size());
        pairs_out.emplace_back(static_cast<ElemId>(x), static_cast<ElemId>(y));
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t x = 0; x < j.num_elements(); ++x) {
    const auto jx = static_cast<ElemId>(x);
    for (auto v : b.arrows_from(j.element(jx).b)) {
      for (std::size_t y = 0; y < h.num_elements(); ++y) {
        const auto hy = static_cast<ElemId>(y);
        if (h.element(hy).a != b.target(v)) continue;
        edges.emplace_back(index.at({j.right(v, jx), hy}), index.at({jx, h.left(v, hy)}));
      }
    }
  }
  std::vector<std::size_t> label(pairs_out.size());
  std::iota(label.begin(), label.end(), std::size_t{0});
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [p, q] : edges) {
      const auto m = std::min(label[p], label[q]);
      if (label[p] != m || label[q] != m) {
        label[p] = label[q] = m;
        changed = true;
      }
    }
  }
  return label;
}

Tally coend_oracle(const Corpus& c) {
  const auto ts = triples(c, kAll, 0);
  return over(ts.size(), [&](std::size_t n, Tally& t) {
    const auto [i, j, k] = ts[n];
    for (const auto& jp : c.between(i, j)) {
      for (const auto& hp : c.between(j, k)) {
        const auto comp = compose_prof(jp, hp);
        std::vector<std::pair<ElemId, ElemId>> ps;
        const auto label = closure_classes(*jp, *hp, ps);
        bool ok = true;
        std::map<std::size_t, ElemId> cls_of_label;
        std::set<ElemId> used;
        for (std::size_t p = 0; p < ps.size() && ok; ++p) {
          const auto cls = comp.cls(ps[p].first, ps[p].second);
          auto [it, fresh] = cls_of_label.emplace(label[p], cls);
          if (fresh) ok = used.insert(cls).second;
          else ok = it->second == cls;
        }
        ok = ok && cls_of_label.size() == comp.prof->num_elements();
        t.expect(ok, "coend classes of " + nm(jp) + " (.) " + nm(hp));
      }
    }
  });
}

// --- 4 -----------------------------------------------------------------------

Tally rhom_adjunction(const Corpus& c) {
  const auto ts = triples(c, kAll, 0);
  return over(ts.size(), [&](std::size_t n, Tally& t) {
    const auto [ia, ib, ie] = ts[n];
    const auto ida = identity_functor(c.categories[ia]);
    const auto ide = identity_functor(c.categories[ie]);
    const auto idb = identity_functor(c.categories[ib]);
    for (const auto& j : c.between(ia, ib)) {
      for (const auto& h : c.between(ib, ie)) {
        for (const auto& k : c.between(ia, ie)) {
          const auto jh = compose_prof(j, h);
          const auto kh = rhom(k, h);
          const auto left = all_cells(jh.prof, k, ida, ide);
          const auto right = all_cells(j, kh.prof, ida, idb);
          bool ok = left.size() == right.size();
          std::set<std::vector<ElemId>> images;
          for (const auto& theta : left) {
            if (!ok) break;
            const auto flat = transpose_flat(theta, jh, kh);
            ok = validate_cell(flat).ok() && transpose_sharp(flat, jh, kh) == theta &&
                 images.insert(flat.map).second;
          }
          for (const auto& psi : right) {
            if (!ok) break;
            ok = transpose_flat(transpose_sharp(psi, jh, kh), jh, kh) == psi;
          }
          t.expect(ok, "adjunction at " + nm(j) + ", " + nm(h) + ", " + nm(k) + ": " +
                           std::to_string(left.size()) + " vs " + std::to_string(right.size()));
        }
      }
    }
  });
}

// --- 5, 6 --------------------------------------------------------------------

struct KanJob {
  ProfPtr j;
  Functor d;
};

std::vector<KanJob> kan_jobs(const Corpus& c, const Config& cfg, std::size_t n) {
  std::vector<KanJob> jobs;
  const auto ts = triples(c, n, mix(cfg.seed, 5));
  for (std::size_t q = 0; q < ts.size(); ++q) {
    const auto [ia, ib, im] = ts[q];
    for (const auto& j : take(c.between(ia, ib), 1, mix(cfg.seed, q, 1))) {
      for (const auto& d : functors(c.categories[ib], c.categories[im], 2, mix(cfg.seed, q, 2))) {
        jobs.push_back({j, d});
      }
    }
  }
  return jobs;
}

Tally kan_soundness(const Corpus& c, const Config& cfg, std::string& note) {
  const auto jobs = kan_jobs(c, cfg, 300);
  std::atomic<std::size_t> no_limit{0};
  Tally t = over(jobs.size(), [&](std::size_t n, Tally& t) {
    const auto& job = jobs[n];
    try {
      const auto cand = pointwise_ran(job.j, job.d);
      KanReport rep;
      const bool ordinary = is_ran(cand, &rep);
      const bool pointwise = is_pointwise_ran(cand, &rep);
      t.expect(ordinary && pointwise && rep.pointwise_limits == rep.pointwise_rhom,
               "pointwise_ran of " + job.d.name + " along " + nm(job.j));
    } catch (const NoLimit&) {
      ++no_limit;
    }
    const auto m = job.d.target;
    const auto homm = hom_profunctor(m);
    for (const auto& r : functors(job.j->source(), m, 3, mix(cfg.seed, n, 3))) {
      for (const auto& eps : take(all_cells(job.j, homm, r, job.d), 3, mix(cfg.seed, n, 4))) {
        const RanCandidate cand{job.j, job.d, r, eps};
        const auto rep = analyse_ran(cand);
        t.expect(rep.pointwise_limits == rep.pointwise_rhom,
                 "pointwise procedures disagree at " + nm(job.j));
      }
    }
  });
  const auto ex = non_pointwise_example();
  const RanCandidate cand{ex.j, ex.d, ex.r, ex.counit};
  const auto rep = analyse_ran(cand);
  t.expect(rep.pointwise_limits == rep.pointwise_rhom, "procedures disagree on the fixed example");
  note = std::to_string(no_limit.load()) + " instances without the needed limits; fixed example: "
         "ordinary " + (rep.ordinary ? "true" : "false") + ", pointwise " +
         (rep.pointwise_rhom ? "true" : "false");
  return t;
}

Tally theorem_suite(const Corpus& c, const Config& cfg) {
  auto jobs = kan_jobs(c, cfg, 200);
  const auto ex = non_pointwise_example();
  jobs.push_back({ex.j, ex.d});
  return over(jobs.size(), [&](std::size_t n, Tally& t) {
    const auto& job = jobs[n];
    const auto& a = job.j->source();
    const auto m = job.d.target;
    const auto homm = hom_profunctor(m);
    const auto probes = object_probes(a);
    for (const auto& r : functors(a, m, 3, mix(cfg.seed, n, 3))) {
      for (const auto& eps : take(all_cells(job.j, homm, r, job.d), 3, mix(cfg.seed, n, 4))) {
        const RanCandidate cand{job.j, job.d, r, eps};
        const auto rep = check_pointwise_probes(cand, probes);
        bool all_b = true;
        for (const auto& p : rep.probes) {
          all_b = all_b && p.pointwise;
          t.expect(!p.pointwise || p.ordinary, "(b) without (c) at " + p.probe);
        }
        t.expect(rep.candidate_pointwise == all_b, "(a) <=> (b) fails at " + nm(job.j));
        const auto id = check_pointwise_probes(cand, {identity_functor(a)});
        t.expect(id.probes.front().pointwise == rep.candidate_pointwise,
                 "identity probe differs from (a) at " + nm(job.j));
      }
    }
  });
}

// --- 7 -----------------------------------------------------------------------

Tally exactness(const Corpus& c, const Config& cfg) {
  const auto probes = probe_categories(cfg.probe_max_objects);
  const auto ts = triples(c, 150, mix(cfg.seed, 7));
  Tally t = over(ts.size(), [&](std::size_t n, Tally& t) {
    const auto [ia, ic, id] = ts[n];
    for (const auto& f : functors(c.categories[ia], c.categories[ic], 2, mix(cfg.seed, n, 1))) {
      for (const auto& k : functors(c.categories[id], c.categories[ic], 2, mix(cfg.seed, n, 2))) {
        const auto cell = comma_square_cell(f, k);
        const bool bc = beck_chevalley(cell);
        t.expect(bc, "comma square of " + f.name + ", " + k.name + " fails Beck-Chevalley");
        if (bc && n % 5 == 0) {
          t.expect(is_right_exact(cell, ExactMode::pointwise, probes).exact,
                   "Beck-Chevalley comma square not pointwise right exact");
        }
      }
    }
  });
  // Cells with identity boundaries between corpus profunctors.
  const auto ps = pairs(c, 60, mix(cfg.seed, 71));
  t.merge(over(ps.size(), [&](std::size_t n, Tally& t) {
    const auto [ia, ib] = ps[n];
    const auto& list = c.between(ia, ib);
    if (list.empty()) return;
    const auto& j = list[n % list.size()];
    const auto& k = list[(n / 2) % list.size()];
    for (const auto& phi : take(all_cells(j, k, identity_functor(c.categories[ia]),
                                          identity_functor(c.categories[ib])),
                                2, mix(cfg.seed, n, 3))) {
      if (!beck_chevalley(phi)) continue;
      t.expect(is_right_exact(phi, ExactMode::pointwise, probes).exact,
               "Beck-Chevalley cell " + nm(j) + " => " + nm(k) + " not pointwise right exact");
    }
    t.expect(beck_chevalley(identity_cell(j)) &&
                 is_right_exact(identity_cell(j), ExactMode::ordinary, probes).exact,
             "identity cell of " + nm(j) + " not exact");
  }));
  const auto one = one_category();
  const Cell empty_square{empty_profunctor(one, one), hom_profunctor(one), identity_functor(one),
                          identity_functor(one), {}, "empty"};
  t.expect(!beck_chevalley(empty_square), "the empty square passes Beck-Chevalley");
  return t;
}

// --- 8 -----------------------------------------------------------------------

Tally initiality(const Corpus& c, const Config& cfg) {
  Tally t;
  const auto one = one_category();
  const auto two = two_category();
  const auto i0 = is_initial_functor(pick(one, two, 0));
  const auto i1 = is_initial_functor(pick(one, two, 1));
  t.expect(i0.initial, "pick0 is not initial");
  t.expect(!i1.initial && i1.witness == "g/0 empty", "pick1: " + i1.witness);
  const auto ps = pairs(c, 200, mix(cfg.seed, 8));
  t.merge(over(ps.size(), [&](std::size_t n, Tally& t) {
    const auto [ib, id] = ps[n];
    const auto& dcat_ = c.categories[id];
    for (const auto& g : functors(c.categories[ib], dcat_, 4, mix(cfg.seed, n, 1))) {
      if (!is_initial_functor(g).initial) continue;
      for (std::size_t im = 0; im < c.size(); im += 2) {
        for (const auto& d : functors(dcat_, c.categories[im], 2, mix(cfg.seed, n, im))) {
          if (!limit(d)) continue;
          const auto lt = limit_along(g, d);
          t.expect(lt.ok() && lt.iso, "limit comparison along " + g.name + " for " + d.name);
        }
      }
    }
  }));
  return t;
}

// --- 9 -----------------------------------------------------------------------

std::vector<ProfPtr> all_profunctors(const Corpus& c) {
  std::vector<ProfPtr> out;
  for (const auto& list : c.profunctors) out.insert(out.end(), list.begin(), list.end());
  return out;
}

Tally tabulations(const Corpus& c, const Config& cfg) {
  const std::vector<CatPtr> probes{one_category(), two_category(), parallel_pair()};
  const auto profs = all_profunctors(c);
  Tally t = over(profs.size(), [&](std::size_t n, Tally& t) {
    const auto tab = tabulate(profs[n]);
    const auto rep = verify_tabulation(tab, probes);
    t.expect(rep.ok(), "tabulation of " + nm(profs[n]) + ": " + rep.witness);
    t.expect(is_opcartesian_tabulation(tab), "tabulation of " + nm(profs[n]) + " not opcartesian");
  });
  const auto ts = triples(c, 150, mix(cfg.seed, 91));
  t.merge(over(ts.size(), [&](std::size_t n, Tally& t) {
    const auto [ia, ib, ic] = ts[n];
    for (const auto& f : functors(c.categories[ia], c.categories[ic], 2, mix(cfg.seed, n, 1))) {
      for (const auto& g : functors(c.categories[ib], c.categories[ic], 2, mix(cfg.seed, n, 2))) {
        const auto co = comma_object(f, g);
        const auto direct = comma_category(f, g);
        t.expect(find_isomorphism(co.tabulation.total, direct.category).has_value(),
                 "comma object of " + f.name + ", " + g.name);
      }
    }
  }));
  return t;
}

// --- 10 ----------------------------------------------------------------------

Tally internal_construction(const Corpus& c) {
  Tally t;
  {
    const auto two = span::from_fincat(two_category());
    const auto tab = span::internal_tabulate(span::unit_profunctor(two));
    t.expect(tab.total->num_objects() == 3 && tab.total->num_arrows() == 6,
             "tabulation of the Two hom has " + std::to_string(tab.total->num_objects()) +
                 " objects and " + std::to_string(tab.total->num_arrows()) + " arrows");
  }
  const auto profs = all_profunctors(c);
  t.merge(over(profs.size(), [&](std::size_t n, Tally& t) {
    const auto& p = profs[n];
    const auto ip = span::from_prof(p);
    const auto tab = span::internal_tabulate(ip);
    const auto rep = span::verify_internal_tabulation(tab);
    t.expect(rep.ok(), "internal tabulation of " + nm(p) + ": " + rep.witness);
    t.expect(find_isomorphism(span::to_fincat(*tab.total), tabulate(p).total).has_value(),
             "internal tabulation of " + nm(p) + " differs from the tabulation");
    t.expect(*span::to_prof(*ip) == *p, "profunctor bridge round trip at " + nm(p));
  }));
  return t;
}

// --- 11 ----------------------------------------------------------------------

Tally vertical_correspondence(const Corpus& c) {
  const auto ts = triples(c, kAll, 0);
  return over(ts.size(), [&](std::size_t n, Tally& t) {
    const auto [ia, ic, id] = ts[n];
    const auto& a = c.categories[ia];
    const auto ia_ = span::from_fincat(a);
    const auto hom = hom_profunctor(a);
    for (const auto& p : c.between(ic, id)) {
      const auto k = span::from_prof(p);
      for (const auto& f : all_functors(a, c.categories[ic])) {
        for (const auto& g : all_functors(a, c.categories[id])) {
          const auto fi = span::from_functor(f, ia_, k->source);
          const auto gi = span::from_functor(g, ia_, k->target);
          const auto cells = all_cells(hom, p, f, g);
          for (const auto& cell : cells) {
            const auto phi = span::from_cell(cell, span::unit_profunctor(ia_), k);
            const auto back = span::transformation_of(span::components_of(phi), fi, gi, k);
            t.expect(back.phi == phi.phi, "round trip of a transformation into " + nm(p));
          }
          // Every candidate phi_0 with the right fibres.
          std::vector<std::vector<ElemId>> choices;
          for (std::size_t x = 0; x < a->num_objects(); ++x) {
            const auto fib = p->fiber(f.obj(static_cast<ObjectId>(x)), g.obj(static_cast<ObjectId>(x)));
            choices.emplace_back(fib.begin(), fib.end());
          }
          std::size_t total = 1;
          for (const auto& ch : choices) total *= ch.size();
          if (total > 4096) continue;
          std::size_t valid = 0;
          for (std::size_t code = 0; code < total; ++code) {
            span::Map phi0{a->num_objects(), k->size(), {}};
            auto rest = code;
            for (const auto& ch : choices) {
              phi0.values.push_back(static_cast<std::size_t>(ch[rest % ch.size()]));
              rest /= ch.size();
            }
            try {
              const auto phi = span::transformation_of(phi0, fi, gi, k);
              ++valid;
              t.expect(span::components_of(phi) == phi0, "round trip of components into " + nm(p));
            } catch (const span::NaturalityFailure&) {
            }
          }
          t.expect(valid == cells.size(), "component cells and transformations differ in number");
        }
      }
    }
  });
}

// --- 12 ----------------------------------------------------------------------

dsl::Workspace corpus_workspace(const Corpus& c, const Config& cfg) {
  dsl::Workspace w;
  std::set<std::string> names;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (names.insert(c.categories[i]->name()).second) {
      w.categories.push_back({c.categories[i]->name(), c.categories[i], {}});
      chosen.push_back(i);
    }
  }
  std::size_t serial = 0;
  const auto label = [&](const char* p) { return std::string(p) + std::to_string(serial++); };
  for (std::size_t i : take(chosen, 6, mix(cfg.seed, 12))) {
    for (std::size_t j : take(chosen, 3, mix(cfg.seed, 12, i))) {
      const auto& a = c.categories[i];
      const auto& b = c.categories[j];
      for (auto f : functors(a, b, 1, mix(cfg.seed, i, j))) {
        f.name = label("F");
        w.functors.push_back({f.name, a->name(), b->name(), f, {}});
      }
      for (const auto& p : take(c.between(i, j), 1, mix(cfg.seed, j, i))) {
        const auto q = std::make_shared<const Profunctor>(label("J"), a, b, p->elements(), p->table());
        w.profunctors.push_back({q->name(), a->name(), b->name(), q, {}});
        auto ida = identity_functor(a);
        ida.name = label("id");
        auto idb = identity_functor(b);
        idb.name = label("id");
        w.functors.push_back({ida.name, a->name(), a->name(), ida, {}});
        w.functors.push_back({idb.name, b->name(), b->name(), idb, {}});
        auto cell = identity_cell(q);
        cell.left = ida;
        cell.right = idb;
        cell.name = label("c");
        w.cells.push_back({cell.name, q->name(), q->name(), ida.name, idb.name, cell, {}});
      }
    }
  }
  return w;
}

Tally dsl_checks(const Corpus& c, const Config& cfg) {
  Tally t;
  const auto w = corpus_workspace(c, cfg);
  const auto text = dsl::serialize(w);
  const auto back = dsl::parse(text);
  t.expect(back == w, "corpus workspace does not round-trip");
  t.expect(dsl::serialize(back) == text, "serialize is not idempotent");
  for (const auto& s : builtin_seeds()) {
    const auto ws = dsl::parse(s);
    t.expect(dsl::parse(dsl::serialize(ws)) == ws, "builtin seed does not round-trip");
  }
  std::vector<std::string> seeds = builtin_seeds();
  seeds.push_back(text.substr(0, std::min<std::size_t>(text.size(), 4000)));
  const auto outcomes = parallel::map_indexed(cfg.fuzz_cases, [&](std::size_t i) {
    std::string detail;
    const auto o = classify(fuzz_case(seeds, cfg.seed, i), &detail);
    return std::pair{o, o == FuzzOutcome::crashed ? detail : std::string()};
  });
  for (const auto& [o, detail] : outcomes) {
    t.expect(o != FuzzOutcome::crashed, "parser crashed: " + detail);
  }
  return t;
}

}  // namespace

// --- public ------------------------------------------------------------------

Corpus make_corpus(const Config& config) {
  Corpus c;
  c.categories = small_categories(config.max_objects, 3);
  c.categories.push_back(parallel_pair());
  c.categories.push_back(iso_category());
  if (config.max_objects >= 3) c.categories.push_back(cospan_category());
  const auto n = c.size();
  c.profunctors.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = c.categories[i];
      const auto& b = c.categories[j];
      const auto weight = a->num_arrows() * b->num_arrows();
      std::vector<ProfPtr> ones;
      for (const auto& p : enumerate_profunctors(a, b, 1, 64)) {
        if (p->num_elements() > 0 || weight <= 4) ones.push_back(p);
      }
      auto chosen = sample(ones, weight >= 9 ? 1 : 3, mix(config.seed, i, j));
      if (a->num_objects() * b->num_objects() <= 2 && weight <= 6) {
        const auto twos = enumerate_profunctors(a, b, 2, 64);
        for (const auto& p : sample(twos, 1, mix(config.seed, j, i))) {
          if (std::none_of(chosen.begin(), chosen.end(), [&](const ProfPtr& q) { return *q == *p; }))
            chosen.push_back(p);
        }
      }
      c.profunctors[i * n + j] = std::move(chosen);
    }
  }
  return c;
}

const std::string& title(int id) {
  static const std::vector<std::string> titles{
      "double-category laws: interchange, pentagon, triangle, units",
      "companion and conjoint identities; restriction formula",
      "coend classes against fixed-point closure",
      "right hom adjunction bijection",
      "Kan soundness and agreement of the pointwise procedures",
      "pointwise probes: (a) <=> (b) => (c)",
      "exactness: Beck-Chevalley and right exactness",
      "initial functors and limit transport",
      "tabulations and comma objects",
      "internal tabulation construction",
      "vertical transformation correspondence",
      "dsl round trip and parser fuzzing"};
  static const std::string none = "unknown";
  return id >= 1 && id <= kCriteria ? titles[static_cast<std::size_t>(id - 1)] : none;
}

Result run(int id, const Corpus& corpus, const Config& config) {
  const auto start = std::chrono::steady_clock::now();
  Result r;
  r.id = id;
  r.title = title(id);
  Tally t;
  try {
    switch (id) {
      case 1: t = double_category_laws(corpus, config); break;
      case 2: t = companions_and_restriction(corpus, config); break;
      case 3: t = coend_oracle(corpus); break;
      case 4: t = rhom_adjunction(corpus); break;
      case 5: t = kan_soundness(corpus, config, r.note); break;
      case 6: t = theorem_suite(corpus, config); break;
      case 7: t = exactness(corpus, config); break;
      case 8: t = initiality(corpus, config); break;
      case 9: t = tabulations(corpus, config); break;
      case 10: t = internal_construction(corpus); break;
      case 11: t = vertical_correspondence(corpus); break;
      case 12: t = dsl_checks(corpus, config); break;
      default: t.expect(false, "no such criterion");
    }
  } catch (const Error& e) {
    t.expect(false, std::string("exception: ") + e.what());
  }
  r.checked = t.checked;
  r.failures = t.failures;
  r.witness = t.witness;
  r.passed = t.failures == 0 && t.checked > 0;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<Result> run_all(const Config& config) {
  const auto corpus = make_corpus(config);
  std::vector<Result> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run(id, corpus, config));
  return out;
}

NonPointwiseExample non_pointwise_example() {
  const auto a = CategoryBuilder("A").object("0").object("1").arrow("a", "1", "0").build();
  const auto b = CategoryBuilder("B").object("0").build();
  const auto m = CategoryBuilder("M").object("0").arrow("a", "0", "0").compose("a", "a", "1_0").build();
  const auto j = ProfunctorBuilder("J", a, b).element("e0", "1", "0").build();
  auto d = constant_functor(b, m, 0);
  d.name = "d";
  auto r = constant_functor(a, m, 0);
  r.name = "r";
  Cell eps{j, hom_profunctor(m), r, d, {m->identity(0)}, "eps"};
  return {j, d, r, eps};
}

const std::vector<std::string>& builtin_seeds() {
  static const std::vector<std::string> seeds{
      R"dcat(category One {
  objects: *;
}

category Two {
  objects: 0, 1;
  arrow w: 0 -> 1;
}

functor pick0 : One -> Two {
  obj * => 0;
}

profunctor Jstar : Two -/-> One {
  elt "(1_0,*)" : 0 -/-> *;
}

profunctor HomTwo : Two -/-> Two {
  elt 1_0 : 0 -/-> 0;
  elt 1_1 : 1 -/-> 1;
  elt w : 0 -/-> 1;
  act w . 1_0 . 1_0 = w;
  act 1_1 . 1_1 . w = w;
}
)dcat",
      R"dcat(# a monoid and its hom
category M {
  objects: 0;
  arrow a: 0 -> 0;
  compose a . a = 1_0;
}

functor F : M -> M {
  obj 0 => 0;
  arr a => a;
}

profunctor H : M -/-> M {
  elt 1_0 : 0 -/-> 0;
  elt a : 0 -/-> 0;
  act a . 1_0 . 1_0 = a;
  act 1_0 . 1_0 . a = a;
  act a . 1_0 . a = 1_0;
  act a . a . 1_0 = 1_0;
  act 1_0 . a . a = 1_0;
  act a . a . a = a;
}

cell c : H => H left F right F {
  map 1_0 => 1_0;
  map a => a;
}
)dcat"};
  return seeds;
}

std::string fuzz_case(const std::vector<std::string>& seeds, std::uint64_t seed, std::size_t i) {
  std::mt19937_64 rng(mix(seed, i, 0xF022));
  std::string s = seeds[rng() % seeds.size()];
  static const char* snippets[] = {
      "{", "}", ":", ";", ",", "->", "-/->", "=>", ".", "=", "\"", "\\", "#", "\n", " ",
      "category", "functor", "profunctor", "cell", "objects", "arrow", "compose", "obj",
      "arr", "elt", "act", "map", "left", "right", "x", "1_0", "w", "0", "*", "\"(a,b)\"",
      "category X { objects: p; }", "act w . w . w = w;", "compose w . w = w;"};
  const auto ops = 1 + rng() % 4;
  for (std::size_t k = 0; k < ops; ++k) {
    const auto pos = s.empty() ? 0 : rng() % (s.size() + 1);
    switch (rng() % 6) {
      case 0:
        s.erase(pos, 1 + rng() % 8);
        break;
      case 1:
        s.insert(pos, snippets[rng() % std::size(snippets)]);
        break;
      case 2:
        if (!s.empty()) s[rng() % s.size()] = static_cast<char>(rng() % 256);
        break;
      case 3: {
        const auto len = 1 + rng() % 24;
        s.insert(pos, s.substr(pos, len));
        break;
      }
      case 4:
        s.resize(pos);
        break;
      default:
        if (!s.empty()) std::swap(s[rng() % s.size()], s[rng() % s.size()]);
    }
  }
  return s;
}

FuzzOutcome classify(const std::string& text, std::string* detail) {
  try {
    const auto w = dsl::parse(text);
    if (!(dsl::parse(dsl::serialize(w)) == w)) {
      if (detail) *detail = "accepted text does not round-trip";
      return FuzzOutcome::crashed;
    }
    return FuzzOutcome::accepted;
  } catch (const dsl::ParseError&) {
    return FuzzOutcome::rejected;
  } catch (const dsl::WorkspaceValidationError&) {
    return FuzzOutcome::rejected;
  } catch (const std::exception& e) {
    if (detail) *detail = e.what();
    return FuzzOutcome::crashed;
  } catch (...) {
    if (detail) *detail = "unknown exception";
    return FuzzOutcome::crashed;
  }
}

}  // namespace dcat::laws
