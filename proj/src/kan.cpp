#include "dcat/kan.hpp"

#include <algorithm>
#include <map>

#include "dcat/corpus.hpp"
#include "dcat/parallel.hpp"
#include "dcat/tab.hpp"

namespace dcat {

namespace {

std::string functor_label(const Functor& f) {
  std::string s = "{";
  for (std::size_t x = 0; x < f.on_objects.size(); ++x) {
    if (x) s += ",";
    s += f.source->object_name(static_cast<ObjectId>(x)) + "->" +
         f.target->object_name(f.on_objects[x]);
  }
  return s + "}";
}

/// The category of elements of J(a, -): the tabulation of J(pick_a, 1).
/// Object i corresponds to J.from(a)[i].
Tabulation elements_at(const ProfPtr& j, ObjectId a) {
  const auto one = one_category();
  return tabulate(restrict(j, pick(one, j->source(), a), identity_functor(j->target())).prof);
}

Cone cone_of(const RanCandidate& c, ObjectId a) {
  Cone cone{c.extension.obj(a), {}};
  for (auto j : c.along->from(a)) cone.legs.push_back(c.counit.map[j]);
  return cone;
}

/// The cell j |-> eps(j) . tau_(j.a) of a vertical cell tau: s => r.
std::vector<ElemId> factor_through(const RanCandidate& c, const NatTransf& tau) {
  const auto& m = *c.of.target;
  std::vector<ElemId> out;
  out.reserve(c.along->num_elements());
  for (std::size_t j = 0; j < c.along->num_elements(); ++j) {
    const auto a = c.along->element(static_cast<ElemId>(j)).a;
    out.push_back(m.compose(c.counit.map[j], tau.components[a]));
  }
  return out;
}

struct SOutcome {
  std::size_t cells = 0;
  std::optional<FactorizationWitness> witness;
};

}  // namespace

ValidationReport validate_candidate(const RanCandidate& c) {
  ValidationReport r;
  const auto& j = *c.along;
  if (!same_category(c.extension.source, j.source()) || !same_category(c.of.source, j.target()) ||
      !same_category(c.extension.target, c.of.target)) {
    r.violations.push_back("candidate: boundaries of J, d and r do not match");
    return r;
  }
  if (!same_prof(c.counit.source, c.along) ||
      !same_prof(c.counit.target, hom_profunctor(c.of.target)) ||
      !(c.counit.left == c.extension) || !(c.counit.right == c.of)) {
    r.violations.push_back("candidate: counit does not have boundary (r, d) into the unit");
    return r;
  }
  for (auto& v : validate_functor(c.of).violations) r.violations.push_back(v);
  for (auto& v : validate_functor(c.extension).violations) r.violations.push_back(v);
  for (auto& v : validate_cell(c.counit).violations) r.violations.push_back(v);
  return r;
}

RanCandidate pointwise_ran(const ProfPtr& jp, const Functor& d) {
  if (!same_category(d.source, jp->target())) {
    throw BoundaryMismatch("pointwise_ran: d must start at the target of " + jp->name());
  }
  const auto& j = *jp;
  const auto& a = *j.source();
  const auto na = a.num_objects();
  std::vector<std::size_t> pos(j.num_elements(), 0);
  for (std::size_t x = 0; x < na; ++x) {
    const auto from = j.from(static_cast<ObjectId>(x));
    for (std::size_t i = 0; i < from.size(); ++i) pos[from[i]] = i;
  }
  struct Slice {
    Functor diagram;
    std::optional<Cone> lim;
  };
  const auto slices = parallel::map_indexed(na, [&](std::size_t x) {
    const auto el = elements_at(jp, static_cast<ObjectId>(x));
    auto diagram = compose(d, el.proj_b);
    auto lim = limit(diagram);
    return Slice{std::move(diagram), std::move(lim)};
  });
  for (std::size_t x = 0; x < na; ++x) {
    if (!slices[x].lim) {
      throw NoLimit(static_cast<ObjectId>(x), "no limit of " + d.name + " over the elements of " +
                                                  j.name() + " at " +
                                                  a.object_name(static_cast<ObjectId>(x)));
    }
  }
  Functor r{j.source(), d.target, {}, {}, "Ran_" + j.name() + "(" + d.name + ")"};
  for (std::size_t x = 0; x < na; ++x) r.on_objects.push_back(slices[x].lim->apex);
  for (std::size_t ui = 0; ui < a.num_arrows(); ++ui) {
    const auto u = static_cast<ArrowId>(ui);
    const auto src = a.source(u);
    const auto tgt = a.target(u);
    Cone cone{slices[src].lim->apex, {}};
    for (auto e : j.from(tgt)) cone.legs.push_back(slices[src].lim->legs[pos[j.left(u, e)]]);
    const auto med = mediating_arrows(slices[tgt].diagram, *slices[tgt].lim, cone);
    if (med.size() != 1) {
      throw InternalInvariant("pointwise_ran: no unique mediating arrow for " + a.arrow(u).name);
    }
    r.on_arrows.push_back(med.front());
  }
  Cell eps{jp, hom_profunctor(d.target), r, d, {}, "eps"};
  for (std::size_t e = 0; e < j.num_elements(); ++e) {
    const auto x = j.element(static_cast<ElemId>(e)).a;
    eps.map.push_back(slices[x].lim->legs[pos[e]]);
  }
  RanCandidate c{jp, d, std::move(r), std::move(eps)};
  const auto rep = validate_candidate(c);
  if (!rep.ok()) throw InternalInvariant("pointwise_ran: " + rep.violations.front());
  return c;
}

bool is_ran(const RanCandidate& c, KanReport* report) {
  const auto& mcat = c.of.target;
  const auto homm = hom_profunctor(mcat);
  const auto ss = all_functors(c.along->source(), mcat);
  const auto outcomes = parallel::map_indexed(ss.size(), [&](std::size_t i) {
    const auto& s = ss[i];
    SOutcome o;
    std::map<std::vector<ElemId>, std::size_t> hits;
    for (const auto& tau : all_nat_transfs(s, c.extension)) ++hits[factor_through(c, tau)];
    for (auto& phi : all_cells(c.along, homm, s, c.of)) {
      ++o.cells;
      auto it = hits.find(phi.map);
      const std::size_t n = it == hits.end() ? 0 : it->second;
      if (n != 1 && !o.witness) {
        phi.name = "phi";
        o.witness = FactorizationWitness{s, std::move(phi), n};
      }
    }
    return o;
  });
  bool ok = true;
  std::size_t cells = 0;
  std::optional<FactorizationWitness> witness;
  for (const auto& o : outcomes) {
    cells += o.cells;
    if (o.witness && ok) {
      ok = false;
      witness = o.witness;
    }
  }
  if (report) {
    report->ordinary = ok;
    report->test_cells = cells;
    report->witness = std::move(witness);
  }
  return ok;
}

bool is_pointwise_ran(const RanCandidate& c, KanReport* report) {
  // (i) the transpose of eps^* under the right hom adjunction.
  const auto rc = conjoint_unchecked(c.extension);
  const auto dc = conjoint_unchecked(c.of);
  const auto theta = vcompose(upper_star(c.counit), left_unitor(dc.prof));
  const auto jh = compose_prof(rc.prof, c.along);
  const auto kh = rhom(dc.prof, c.along);
  if (!same_prof(theta.source, jh.prof)) {
    throw InternalInvariant("is_pointwise_ran: composite of r^* and J is not canonical");
  }
  const bool via_rhom = is_componentwise_bijective(transpose_flat(theta, jh, kh));

  // (ii) limit comparison at every object.
  const auto& a = *c.along->source();
  const auto comps = parallel::map_indexed(a.num_objects(), [&](std::size_t x) {
    const auto obj = static_cast<ObjectId>(x);
    const auto el = elements_at(c.along, obj);
    const auto diagram = compose(c.of, el.proj_b);
    LimitComparison lc;
    lc.object = obj;
    const auto lim = limit(diagram);
    if (!lim) return lc;
    lc.limit_exists = true;
    lc.limit_apex = lim->apex;
    const auto cone = cone_of(c, obj);
    if (!is_cone(diagram, cone)) {
      throw InternalInvariant("is_pointwise_ran: counit legs do not form a cone");
    }
    const auto med = mediating_arrows(diagram, *lim, cone);
    if (med.size() != 1) throw InternalInvariant("is_pointwise_ran: limit is not terminal");
    lc.comparison = med.front();
    lc.is_iso = inverse(*c.of.target, lc.comparison).has_value();
    return lc;
  });
  bool via_limits = true;
  std::optional<ObjectId> failing;
  for (const auto& lc : comps) {
    if (!lc.is_iso) {
      via_limits = false;
      if (!failing) failing = lc.object;
    }
  }
  if (report) {
    report->pointwise_rhom = via_rhom;
    report->pointwise_limits = via_limits;
    report->comparisons = comps;
    report->failing_object = failing;
  }
  if (via_rhom != via_limits) {
    throw OracleDisagreement("pointwise verdicts differ: right hom says " +
                             std::string(via_rhom ? "yes" : "no") + ", limits say " +
                             (via_limits ? "yes" : "no"));
  }
  return via_rhom;
}

KanReport analyse_ran(const RanCandidate& c) {
  KanReport r;
  is_ran(c, &r);
  is_pointwise_ran(c, &r);
  return r;
}

RanCandidate restrict_candidate(const RanCandidate& c, const Functor& f) {
  auto res = restrict(c.along, f, identity_functor(c.along->target()));
  auto eps = vcompose(res.cartesian, c.counit);
  eps.name = c.counit.name + "(" + f.name + ")";
  return RanCandidate{res.prof, c.of, compose(c.extension, f), std::move(eps)};
}

std::vector<Functor> object_probes(const CatPtr& a) {
  std::vector<Functor> out;
  for (std::size_t x = 0; x < a->num_objects(); ++x) {
    out.push_back(pick(one_category(), a, static_cast<ObjectId>(x)));
    out.back().name = "pick_" + a->object_name(static_cast<ObjectId>(x));
  }
  return out;
}

ProbeReport check_pointwise_probes(const RanCandidate& c, const std::vector<Functor>& probes) {
  ProbeReport r;
  r.candidate_pointwise = is_pointwise_ran(c);
  r.probes = parallel::map_indexed(probes.size(), [&](std::size_t i) {
    const auto rc = restrict_candidate(c, probes[i]);
    ProbeVerdict v;
    v.probe = probes[i].name;
    v.pointwise = is_pointwise_ran(rc);
    v.ordinary = is_ran(rc);
    return v;
  });
  return r;
}

namespace {

/// The first ordinary Ran of d along K, by enumeration.
std::optional<RanCandidate> find_ran(const ProfPtr& k, const Functor& d) {
  try {
    return pointwise_ran(k, d);
  } catch (const NoLimit&) {
  }
  const auto homm = hom_profunctor(d.target);
  for (const auto& r : all_functors(k->source(), d.target)) {
    for (auto& eps : all_cells(k, homm, r, d)) {
      RanCandidate c{k, d, r, std::move(eps)};
      if (is_ran(c)) return c;
    }
  }
  return std::nullopt;
}

}  // namespace

ExactReport is_right_exact(const Cell& phi, ExactMode mode, const std::vector<CatPtr>& probes) {
  struct Job {
    std::size_t probe;
    Functor d;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (auto& d : all_functors(phi.right.target, probes[i])) jobs.push_back({i, std::move(d)});
  }
  struct Outcome {
    bool checked = false;
    bool ok = true;
  };
  const auto outcomes = parallel::map_indexed(jobs.size(), [&](std::size_t i) {
    const auto& d = jobs[i].d;
    Outcome o;
    std::optional<RanCandidate> eps;
    if (mode == ExactMode::pointwise) {
      try {
        eps = pointwise_ran(phi.target, d);
      } catch (const NoLimit&) {
        return o;
      }
    } else {
      eps = find_ran(phi.target, d);
      if (!eps) return o;
    }
    o.checked = true;
    RanCandidate moved{phi.source, compose(d, phi.right), compose(eps->extension, phi.left),
                       vcompose(phi, eps->counit)};
    o.ok = mode == ExactMode::pointwise ? is_pointwise_ran(moved) : is_ran(moved);
    return o;
  });
  ExactReport r;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (outcomes[i].checked) ++r.extensions_checked;
    if (!outcomes[i].ok && r.exact) {
      r.exact = false;
      r.witness = "M=" + probes[jobs[i].probe]->name() + " d=" + functor_label(jobs[i].d);
    }
  }
  return r;
}

InitialCellReport check_initial_cell(const Cell& phi, const std::vector<CatPtr>& probes) {
  if (!(phi.left == identity_functor(phi.left.source))) {
    throw PreconditionFailed("initial cell check needs an identity left boundary");
  }
  struct Job {
    std::size_t probe;
    Functor d;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (auto& d : all_functors(phi.right.target, probes[i])) jobs.push_back({i, std::move(d)});
  }
  struct Outcome {
    std::size_t checked = 0;
    bool ordinary = true;
    bool pointwise = true;
    std::string witness;
  };
  const auto outcomes = parallel::map_indexed(jobs.size(), [&](std::size_t i) {
    const auto& d = jobs[i].d;
    const auto homm = hom_profunctor(d.target);
    Outcome o;
    for (const auto& r : all_functors(phi.target->source(), d.target)) {
      for (auto& eps : all_cells(phi.target, homm, r, d)) {
        ++o.checked;
        RanCandidate c{phi.target, d, r, eps};
        RanCandidate moved{phi.source, compose(d, phi.right), compose(r, phi.left),
                           vcompose(phi, eps)};
        const bool ord = is_ran(c) == is_ran(moved);
        const bool pw = is_pointwise_ran(c) == is_pointwise_ran(moved);
        if ((!ord || !pw) && o.witness.empty()) {
          o.witness = "M=" + probes[jobs[i].probe]->name() + " d=" + functor_label(d) +
                      " r=" + functor_label(r);
        }
        o.ordinary = o.ordinary && ord;
        o.pointwise = o.pointwise && pw;
      }
    }
    return o;
  });
  InitialCellReport rep;
  for (const auto& o : outcomes) {
    rep.candidates_checked += o.checked;
    if (rep.witness.empty() && !o.witness.empty()) rep.witness = o.witness;
    rep.initial = rep.initial && o.ordinary;
    rep.pointwise_initial = rep.pointwise_initial && o.pointwise;
  }
  return rep;
}

bool beck_chevalley(const Cell& phi) { return is_componentwise_bijective(lower_star(phi)); }

Cell cell_of_square(const Functor& j, const Functor& g, const Functor& f, const Functor& k,
                    const NatTransf& t) {
  const auto js = conjoint_unchecked(j);
  const auto ks = conjoint_unchecked(k);
  const auto& c = *f.target;
  Cell out{js.prof, ks.prof, f, g, {}, "sq"};
  for (std::size_t e = 0; e < js.prof->num_elements(); ++e) {
    const auto b = js.prof->element(static_cast<ElemId>(e)).b;
    const auto arrow = c.compose(t.components[b], f.arr(js.arrows[e]));
    out.map.push_back(ks.element(arrow, g.obj(b)));
  }
  const auto rep = validate_cell(out);
  if (!rep.ok()) throw ValidationError("square cell: " + rep.violations.front());
  return out;
}

Cell comma_square_cell(const Functor& f, const Functor& k) {
  const auto cm = comma_category(f, k);
  auto cell = cell_of_square(cm.proj_left, cm.proj_right, f, k, cm.cell);
  cell.name = "comma(" + f.name + "," + k.name + ")";
  return cell;
}

InitialReport is_initial_functor(const Functor& g) {
  const auto one = one_category();
  const auto& d = *g.target;
  InitialReport r;
  r.initial = true;
  for (std::size_t x = 0; x < d.num_objects(); ++x) {
    const auto obj = static_cast<ObjectId>(x);
    const auto slice = comma_category(g, pick(one, g.target, obj)).category;
    if (!is_connected(*slice)) {
      r.initial = false;
      r.witness = "g/" + d.object_name(obj) +
                  (slice->num_objects() == 0 ? " empty" : " disconnected");
      break;
    }
  }
  const auto bang_b = conjoint_unchecked(to_terminal(g.source, one));
  const auto bang_d = conjoint_unchecked(to_terminal(g.target, one));
  Cell cart{bang_b.prof, bang_d.prof, identity_functor(one), g, {}, "cart"};
  const auto id = one->identity(0);
  for (std::size_t b = 0; b < g.source->num_objects(); ++b) {
    cart.map.push_back(bang_d.element(id, g.obj(static_cast<ObjectId>(b))));
  }
  r.opcartesian = is_opcartesian(cart);
  r.star_invertible = beck_chevalley(cart);
  if (r.opcartesian != r.initial || r.star_invertible != r.initial) {
    throw InternalInvariant("initiality of " + g.name + ": comma slices and the cartesian cell disagree");
  }
  return r;
}

LimitTransport limit_along(const Functor& g, const Functor& d) {
  LimitTransport t;
  const auto dg = compose(d, g);
  const auto ld = limit(d);
  const auto ldg = limit(dg);
  t.limit_d = ld.has_value();
  t.limit_dg = ldg.has_value();
  if (ld && ldg) {
    Cone restricted{ld->apex, {}};
    for (std::size_t b = 0; b < g.source->num_objects(); ++b) {
      restricted.legs.push_back(ld->legs[g.obj(static_cast<ObjectId>(b))]);
    }
    const auto med = mediating_arrows(dg, *ldg, restricted);
    t.iso = med.size() == 1 && inverse(*d.target, med.front()).has_value();
  }
  return t;
}

RanCandidate paste(const RanCandidate& gamma, const RanCandidate& eps) {
  if (!(gamma.of == eps.extension)) {
    throw BoundaryMismatch("pasting needs the extension of eps to be the functor gamma extends");
  }
  auto counit =
      vcompose(hcompose(gamma.counit, eps.counit), left_unitor(hom_profunctor(eps.of.target)));
  counit.name = gamma.counit.name + "|" + eps.counit.name;
  return RanCandidate{counit.source, eps.of, gamma.extension, std::move(counit)};
}

PastingReport pasting_check(const RanCandidate& gamma, const RanCandidate& eps) {
  if (!is_pointwise_ran(eps)) throw PreconditionFailed("pasting: eps is not a pointwise Ran");
  const auto whole = paste(gamma, eps);
  PastingReport r;
  r.gamma_ordinary = is_ran(gamma);
  r.composite_ordinary = is_ran(whole);
  r.gamma_pointwise = is_pointwise_ran(gamma);
  r.composite_pointwise = is_pointwise_ran(whole);
  return r;
}

RanCandidate precomposition_candidate(const Functor& f, const Functor& r) {
  const auto fs = companion_unchecked(f);
  auto counit = vcompose(fs.epsilon, unit_cell(r));
  counit.name = "1_" + r.name + ".eps_" + f.name;
  return RanCandidate{fs.prof, r, compose(r, f), std::move(counit)};
}

}  // namespace dcat
