#include "dcat/spanfin.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dcat/corpus.hpp"
#include "dcat/parallel.hpp"
#include "detail.hpp"

namespace dcat::span {

// --- finite sets -------------------------------------------------------------

Map identity_map(std::size_t n) {
  Map m{n, n, std::vector<std::size_t>(n)};
  std::iota(m.values.begin(), m.values.end(), std::size_t{0});
  return m;
}

Map compose(const Map& g, const Map& f) {
  if (f.codomain != g.domain) throw BoundaryMismatch("maps of finite sets do not compose");
  Map h{f.domain, g.codomain, {}};
  h.values.reserve(f.domain);
  for (auto x : f.values) h.values.push_back(g(x));
  return h;
}

Pullback FinSetHost::pullback(const Map& f, const Map& g) const {
  if (f.codomain != g.codomain) throw BoundaryMismatch("pullback needs a common codomain");
  Pullback pb;
  pb.f = f;
  pb.g = g;
  pb.index.assign(f.domain * g.domain, Pullback::npos);
  pb.p1 = Map{0, f.domain, {}};
  pb.p2 = Map{0, g.domain, {}};
  for (std::size_t x = 0; x < f.domain; ++x) {
    for (std::size_t y = 0; y < g.domain; ++y) {
      if (f(x) != g(y)) continue;
      pb.index[x * g.domain + y] = pb.pairs.size();
      pb.pairs.emplace_back(x, y);
      pb.p1.values.push_back(x);
      pb.p2.values.push_back(y);
    }
  }
  pb.p1.domain = pb.p2.domain = pb.pairs.size();
  return pb;
}

Map FinSetHost::induce(const Pullback& pb, const Map& a, const Map& b) const {
  if (a.domain != b.domain || a.codomain != pb.f.domain || b.codomain != pb.g.domain) {
    throw BoundaryMismatch("induced map into a pullback: component shapes differ");
  }
  Map h{a.domain, pb.size(), {}};
  for (std::size_t x = 0; x < a.domain; ++x) {
    const auto k = pb.at(a(x), b(x));
    if (k == Pullback::npos) {
      throw InternalInvariant("induced map into a pullback: components disagree at " +
                              std::to_string(x));
    }
    h.values.push_back(k);
  }
  return h;
}

Coequalizer FinSetHost::coequalizer(const Map& p, const Map& q) const {
  if (p.domain != q.domain || p.codomain != q.codomain) {
    throw BoundaryMismatch("coequaliser needs parallel maps");
  }
  detail::UnionFind uf(p.codomain);
  for (std::size_t t = 0; t < p.domain; ++t) uf.unite(p(t), q(t));
  Coequalizer c{p, q, Map{p.codomain, 0, std::vector<std::size_t>(p.codomain)}, {}};
  std::map<std::size_t, std::size_t> cls;
  for (std::size_t x = 0; x < p.codomain; ++x) {
    const auto root = uf.find(x);
    auto it = cls.find(root);
    if (it == cls.end()) {
      it = cls.emplace(root, c.reps.size()).first;
      c.reps.push_back(x);
    }
    c.quotient.values[x] = it->second;
  }
  c.quotient.codomain = c.reps.size();
  return c;
}

Map FinSetHost::descend(const Coequalizer& c, const Map& h) const {
  if (h.domain != c.quotient.domain) throw BoundaryMismatch("descent: wrong domain");
  for (std::size_t t = 0; t < c.p.domain; ++t) {
    if (h(c.p(t)) != h(c.q(t))) throw Error("descent: map does not coequalise");
  }
  Map out{c.reps.size(), h.codomain, {}};
  for (auto x : c.reps) out.values.push_back(h(x));
  return out;
}

const Host& finset() {
  static const FinSetHost host;
  return host;
}

Pullback pullback(const Map& f, const Map& g) { return finset().pullback(f, g); }
Coequalizer coequalizer(const Map& p, const Map& q) { return finset().coequalizer(p, q); }

Span span_compose(const Span& j, const Span& h) {
  if (j.right_foot != h.left_foot) throw BoundaryMismatch("spans do not share a foot");
  const auto pb = pullback(j.d1, h.d0);
  return Span{j.left_foot, h.right_foot, pb.size(), compose(j.d0, pb.p1), compose(h.d1, pb.p2)};
}

namespace {

/// The map Y -> Z through which h: X -> Z factors along the surjection s.
Map factor_through_surjection(const Map& s, const Map& h, const std::string& what) {
  std::vector<std::size_t> out(s.codomain, Pullback::npos);
  for (std::size_t x = 0; x < s.domain; ++x) {
    auto& slot = out[s(x)];
    if (slot == Pullback::npos) slot = h(x);
    else if (slot != h(x)) throw InternalInvariant(what + ": not constant on fibres");
  }
  if (std::find(out.begin(), out.end(), Pullback::npos) != out.end()) {
    throw InternalInvariant(what + ": quotient is not preserved by pullback");
  }
  return Map{s.codomain, h.codomain, std::move(out)};
}

void check(ValidationReport& r, bool ok, const std::string& msg) {
  if (!ok) r.violations.push_back(msg);
}

bool shape(const Map& m, std::size_t dom, std::size_t cod) {
  if (m.domain != dom || m.codomain != cod || m.values.size() != dom) return false;
  return std::all_of(m.values.begin(), m.values.end(), [&](std::size_t v) { return v < cod; });
}

}  // namespace

// --- internal categories -----------------------------------------------------

InternalCategory make_category(std::string name, std::vector<std::string> objects,
                               std::vector<std::string> arrows, Map d0, Map d1,
                               const std::vector<std::size_t>& mul_table, Map e) {
  InternalCategory a;
  a.name = std::move(name);
  a.object_names = std::move(objects);
  a.arrow_names = std::move(arrows);
  a.span = Span{a.object_names.size(), a.object_names.size(), a.arrow_names.size(), std::move(d0),
                std::move(d1)};
  a.composable = pullback(a.span.d1, a.span.d0);
  a.m = Map{a.composable.size(), a.arrow_names.size(), mul_table};
  a.e = std::move(e);
  return a;
}

ValidationReport validate_category(const InternalCategory& a) {
  ValidationReport r;
  const auto n0 = a.num_objects();
  const auto n = a.num_arrows();
  if (!shape(a.span.d0, n, n0) || !shape(a.span.d1, n, n0) || !shape(a.e, n0, n) ||
      !shape(a.m, a.composable.size(), n)) {
    r.violations.push_back("internal category " + a.name + ": structure maps are ill-shaped");
    return r;
  }
  for (std::size_t x = 0; x < n0; ++x) {
    check(r, a.span.d0(a.e(x)) == x && a.span.d1(a.e(x)) == x,
          a.name + ": unit at " + a.object_names[x] + " has the wrong ends");
  }
  for (std::size_t k = 0; k < a.composable.size(); ++k) {
    const auto [f, g] = a.composable.pairs[k];
    check(r, a.span.d0(a.m(k)) == a.span.d0(f) && a.span.d1(a.m(k)) == a.span.d1(g),
          a.name + ": m(" + a.arrow_names[f] + "," + a.arrow_names[g] + ") has the wrong ends");
  }
  if (!r.ok()) return r;
  for (std::size_t f = 0; f < n; ++f) {
    check(r, a.mul(a.e(a.span.d0(f)), f) == f && a.mul(f, a.e(a.span.d1(f))) == f,
          a.name + ": unit law fails at " + a.arrow_names[f]);
  }
  for (const auto& [f, g] : a.composable.pairs) {
    const auto fg = a.mul(f, g);
    for (std::size_t h = 0; h < n; ++h) {
      if (a.span.d0(h) != a.span.d1(g)) continue;
      check(r, a.mul(fg, h) == a.mul(f, a.mul(g, h)),
            a.name + ": associativity fails at (" + a.arrow_names[f] + "," + a.arrow_names[g] +
                "," + a.arrow_names[h] + ")");
    }
  }
  return r;
}

ValidationReport validate_functor(const InternalFunctor& f) {
  ValidationReport r;
  const auto& a = *f.source;
  const auto& c = *f.target;
  if (!shape(f.f0, a.num_objects(), c.num_objects()) ||
      !shape(f.f1, a.num_arrows(), c.num_arrows())) {
    r.violations.push_back("internal functor " + f.name + ": maps are ill-shaped");
    return r;
  }
  for (std::size_t u = 0; u < a.num_arrows(); ++u) {
    check(r,
          c.span.d0(f.f1(u)) == f.f0(a.span.d0(u)) && c.span.d1(f.f1(u)) == f.f0(a.span.d1(u)),
          f.name + ": ends of " + a.arrow_names[u] + " are not preserved");
  }
  if (!r.ok()) return r;
  for (std::size_t x = 0; x < a.num_objects(); ++x) {
    check(r, f.f1(a.e(x)) == c.e(f.f0(x)), f.name + ": unit at " + a.object_names[x]);
  }
  for (const auto& [u, v] : a.composable.pairs) {
    check(r, f.f1(a.mul(u, v)) == c.mul(f.f1(u), f.f1(v)),
          f.name + ": composite of " + a.arrow_names[u] + " and " + a.arrow_names[v]);
  }
  return r;
}

InternalFunctor identity_functor(const ICatPtr& a) {
  return InternalFunctor{a, a, identity_map(a->num_objects()), identity_map(a->num_arrows()),
                         "1_" + a->name};
}

// --- internal profunctors ----------------------------------------------------

ValidationReport validate_profunctor(const InternalProfunctor& j) {
  ValidationReport r;
  const auto& a = *j.source;
  const auto& b = *j.target;
  const auto n = j.size();
  if (!shape(j.span.d0, n, a.num_objects()) || !shape(j.span.d1, n, b.num_objects()) ||
      !shape(j.l, j.left_pairs.size(), n) || !shape(j.r, j.right_pairs.size(), n) ||
      j.left_pairs.f != a.span.d1 || j.left_pairs.g != j.span.d0 ||
      j.right_pairs.f != j.span.d1 || j.right_pairs.g != b.span.d0) {
    r.violations.push_back("internal profunctor " + j.name + ": structure maps are ill-shaped");
    return r;
  }
  for (std::size_t k = 0; k < j.left_pairs.size(); ++k) {
    const auto [u, x] = j.left_pairs.pairs[k];
    check(r, j.span.d0(j.l(k)) == a.span.d0(u) && j.span.d1(j.l(k)) == j.span.d1(x),
          j.name + ": left action of " + a.arrow_names[u] + " on " + j.element_names[x] +
              " has the wrong ends");
  }
  for (std::size_t k = 0; k < j.right_pairs.size(); ++k) {
    const auto [x, v] = j.right_pairs.pairs[k];
    check(r, j.span.d0(j.r(k)) == j.span.d0(x) && j.span.d1(j.r(k)) == b.span.d1(v),
          j.name + ": right action of " + b.arrow_names[v] + " on " + j.element_names[x] +
              " has the wrong ends");
  }
  if (!r.ok()) return r;
  for (std::size_t x = 0; x < n; ++x) {
    check(r, j.left(a.e(j.span.d0(x)), x) == x && j.right(x, b.e(j.span.d1(x))) == x,
          j.name + ": unit law fails at " + j.element_names[x]);
  }
  for (const auto& [u2, u] : a.composable.pairs) {
    for (std::size_t x = 0; x < n; ++x) {
      if (j.span.d0(x) != a.span.d1(u)) continue;
      check(r, j.left(u2, j.left(u, x)) == j.left(a.mul(u2, u), x),
            j.name + ": left associativity fails at " + j.element_names[x]);
    }
  }
  for (const auto& [v, v2] : b.composable.pairs) {
    for (std::size_t x = 0; x < n; ++x) {
      if (j.span.d1(x) != b.span.d0(v)) continue;
      check(r, j.right(j.right(x, v), v2) == j.right(x, b.mul(v, v2)),
            j.name + ": right associativity fails at " + j.element_names[x]);
    }
  }
  for (const auto& [u, x] : j.left_pairs.pairs) {
    for (std::size_t v = 0; v < b.num_arrows(); ++v) {
      if (b.span.d0(v) != j.span.d1(x)) continue;
      check(r, j.right(j.left(u, x), v) == j.left(u, j.right(x, v)),
            j.name + ": mixed associativity fails at " + j.element_names[x]);
    }
  }
  return r;
}

namespace {

InternalProfunctor blank_profunctor(std::string name, const ICatPtr& a, const ICatPtr& b,
                                    std::vector<std::string> names, Map d0, Map d1) {
  InternalProfunctor j;
  j.name = std::move(name);
  j.source = a;
  j.target = b;
  j.element_names = std::move(names);
  j.span = Span{a->num_objects(), b->num_objects(), j.element_names.size(), std::move(d0),
                std::move(d1)};
  j.left_pairs = pullback(a->span.d1, j.span.d0);
  j.right_pairs = pullback(j.span.d1, b->span.d0);
  return j;
}

}  // namespace

IProfPtr unit_profunctor(const ICatPtr& a) {
  auto j = blank_profunctor("1_" + a->name, a, a, a->arrow_names, a->span.d0, a->span.d1);
  j.l = Map{j.left_pairs.size(), a->num_arrows(), {}};
  for (const auto& [u, x] : j.left_pairs.pairs) j.l.values.push_back(a->mul(u, x));
  j.r = Map{j.right_pairs.size(), a->num_arrows(), {}};
  for (const auto& [x, v] : j.right_pairs.pairs) j.r.values.push_back(a->mul(x, v));
  return std::make_shared<const InternalProfunctor>(std::move(j));
}

ValidationReport validate_transformation(const InternalTransformation& t) {
  ValidationReport r;
  const auto& j = *t.source;
  const auto& k = *t.target;
  if (!shape(t.phi, j.size(), k.size())) {
    r.violations.push_back("internal transformation " + t.name + ": map is ill-shaped");
    return r;
  }
  for (std::size_t x = 0; x < j.size(); ++x) {
    if (k.span.d0(t.phi(x)) != t.left.f0(j.span.d0(x)) ||
        k.span.d1(t.phi(x)) != t.right.f0(j.span.d1(x))) {
      r.violations.push_back(t.name + ": component at " + j.element_names[x] +
                             " has the wrong ends");
    }
  }
  if (!r.ok()) return r;
  for (const auto& [u, x] : j.left_pairs.pairs) {
    if (t.phi(j.left(u, x)) != k.left(t.left.f1(u), t.phi(x))) {
      r.violations.push_back(t.name + ": left naturality fails at " + j.element_names[x]);
    }
  }
  for (const auto& [x, v] : j.right_pairs.pairs) {
    if (t.phi(j.right(x, v)) != k.right(t.phi(x), t.right.f1(v))) {
      r.violations.push_back(t.name + ": right naturality fails at " + j.element_names[x]);
    }
  }
  return r;
}

InternalComposite internal_prof_compose(const IProfPtr& jp, const IProfPtr& hp) {
  const auto& j = *jp;
  const auto& h = *hp;
  if (j.target != h.source && !(*to_fincat(*j.target) == *to_fincat(*h.source))) {
    throw BoundaryMismatch("internal composite of " + j.name + " and " + h.name +
                           " needs a common middle category");
  }
  const auto& host = finset();
  const auto& a = *j.source;
  const auto& b = *j.target;
  InternalComposite out;
  out.pairs = host.pullback(j.span.d1, h.span.d0);
  const auto& pr = out.pairs;
  // J x B x H as ((j, v), h).
  const auto triples = host.pullback(compose(b.span.d1, j.right_pairs.p2), h.span.d0);
  const auto act_on_j = host.induce(pr, compose(j.r, triples.p1), triples.p2);
  const auto act_on_h =
      host.induce(pr, compose(j.right_pairs.p1, triples.p1),
                  compose(h.l, host.induce(h.left_pairs, compose(j.right_pairs.p2, triples.p1),
                                           triples.p2)));
  out.quotient = host.coequalizer(act_on_j, act_on_h);
  const auto& q = out.quotient;
  std::vector<std::string> names;
  for (auto rep : q.reps) {
    const auto [x, y] = pr.pairs[rep];
    names.push_back("[" + j.element_names[x] + "|" + h.element_names[y] + "]");
  }
  auto c = blank_profunctor(j.name + "(.)" + h.name, j.source, h.target, std::move(names),
                            host.descend(q, compose(j.span.d0, pr.p1)),
                            host.descend(q, compose(h.span.d1, pr.p2)));
  // Actions descend along the pulled-back quotients.
  {
    const auto lp = host.pullback(a.span.d1, compose(j.span.d0, pr.p1));
    Map acted{lp.size(), q.reps.size(), {}};
    Map onto{lp.size(), c.left_pairs.size(), {}};
    for (const auto& [u, p] : lp.pairs) {
      const auto [x, y] = pr.pairs[p];
      acted.values.push_back(q.quotient(pr.at(j.left(u, x), y)));
      onto.values.push_back(c.left_pairs.at(u, q.quotient(p)));
    }
    c.l = factor_through_surjection(onto, acted, "left action of the composite");
  }
  {
    const auto& e = *h.target;
    const auto rp = host.pullback(compose(h.span.d1, pr.p2), e.span.d0);
    Map acted{rp.size(), q.reps.size(), {}};
    Map onto{rp.size(), c.right_pairs.size(), {}};
    for (const auto& [p, v] : rp.pairs) {
      const auto [x, y] = pr.pairs[p];
      acted.values.push_back(q.quotient(pr.at(x, h.right(y, v))));
      onto.values.push_back(c.right_pairs.at(q.quotient(p), v));
    }
    c.r = factor_through_surjection(onto, acted, "right action of the composite");
  }
  const auto rep = validate_profunctor(c);
  if (!rep.ok()) throw InternalInvariant("internal composite: " + rep.violations.front());
  out.prof = std::make_shared<const InternalProfunctor>(std::move(c));
  return out;
}

// --- bridge ------------------------------------------------------------------

CatPtr to_fincat(const InternalCategory& a) {
  std::vector<FinCategory::Arrow> arrows;
  for (std::size_t u = 0; u < a.num_arrows(); ++u) {
    arrows.push_back({a.arrow_names[u], static_cast<ObjectId>(a.span.d0(u)),
                      static_cast<ObjectId>(a.span.d1(u))});
  }
  std::vector<ArrowId> ids;
  for (auto x : a.e.values) ids.push_back(static_cast<ArrowId>(x));
  const auto n = a.num_arrows();
  std::vector<ArrowId> table(n * n, kNone);
  for (std::size_t k = 0; k < a.composable.size(); ++k) {
    const auto [f, g] = a.composable.pairs[k];
    table[g * n + f] = static_cast<ArrowId>(a.m(k));
  }
  return std::make_shared<const FinCategory>(a.name, a.object_names, std::move(arrows),
                                             std::move(ids), std::move(table));
}

ICatPtr from_fincat(const CatPtr& cp) {
  const auto& c = *cp;
  std::vector<std::string> arrows;
  Map d0{c.num_arrows(), c.num_objects(), {}};
  Map d1{c.num_arrows(), c.num_objects(), {}};
  for (const auto& f : c.arrows()) {
    arrows.push_back(f.name);
    d0.values.push_back(static_cast<std::size_t>(f.source));
    d1.values.push_back(static_cast<std::size_t>(f.target));
  }
  Map e{c.num_objects(), c.num_arrows(), {}};
  for (auto id : c.identities()) e.values.push_back(static_cast<std::size_t>(id));
  const auto composable = pullback(d1, d0);
  std::vector<std::size_t> mul;
  for (const auto& [f, g] : composable.pairs) {
    mul.push_back(static_cast<std::size_t>(
        c.compose(static_cast<ArrowId>(g), static_cast<ArrowId>(f))));
  }
  return std::make_shared<const InternalCategory>(
      make_category(c.name(), c.objects(), std::move(arrows), d0, d1, mul, e));
}

InternalFunctor from_functor(const Functor& f, const ICatPtr& source, const ICatPtr& target) {
  InternalFunctor g{source, target, Map{f.on_objects.size(), target->num_objects(), {}},
                    Map{f.on_arrows.size(), target->num_arrows(), {}}, f.name};
  for (auto x : f.on_objects) g.f0.values.push_back(static_cast<std::size_t>(x));
  for (auto u : f.on_arrows) g.f1.values.push_back(static_cast<std::size_t>(u));
  return g;
}

Functor to_functor(const InternalFunctor& f) {
  Functor g{to_fincat(*f.source), to_fincat(*f.target), {}, {}, f.name};
  for (auto x : f.f0.values) g.on_objects.push_back(static_cast<ObjectId>(x));
  for (auto u : f.f1.values) g.on_arrows.push_back(static_cast<ArrowId>(u));
  return g;
}

ProfPtr to_prof(const InternalProfunctor& j) {
  std::vector<Profunctor::Element> elements;
  for (std::size_t x = 0; x < j.size(); ++x) {
    elements.push_back({j.element_names[x], static_cast<ObjectId>(j.span.d0(x)),
                        static_cast<ObjectId>(j.span.d1(x))});
  }
  return Profunctor::from_action(j.name, to_fincat(*j.source), to_fincat(*j.target),
                                 std::move(elements), [&](ArrowId u, ElemId x, ArrowId v) {
                                   return static_cast<ElemId>(j.right(
                                       j.left(static_cast<std::size_t>(u),
                                              static_cast<std::size_t>(x)),
                                       static_cast<std::size_t>(v)));
                                 });
}

IProfPtr from_prof(const ProfPtr& pp, const ICatPtr& source, const ICatPtr& target) {
  const auto& p = *pp;
  std::vector<std::string> names;
  Map d0{p.num_elements(), source->num_objects(), {}};
  Map d1{p.num_elements(), target->num_objects(), {}};
  for (const auto& e : p.elements()) {
    names.push_back(e.name);
    d0.values.push_back(static_cast<std::size_t>(e.a));
    d1.values.push_back(static_cast<std::size_t>(e.b));
  }
  auto j = blank_profunctor(p.name(), source, target, std::move(names), d0, d1);
  j.l = Map{j.left_pairs.size(), p.num_elements(), {}};
  for (const auto& [u, x] : j.left_pairs.pairs) {
    j.l.values.push_back(static_cast<std::size_t>(
        p.left(static_cast<ArrowId>(u), static_cast<ElemId>(x))));
  }
  j.r = Map{j.right_pairs.size(), p.num_elements(), {}};
  for (const auto& [x, v] : j.right_pairs.pairs) {
    j.r.values.push_back(static_cast<std::size_t>(
        p.right(static_cast<ArrowId>(v), static_cast<ElemId>(x))));
  }
  return std::make_shared<const InternalProfunctor>(std::move(j));
}

IProfPtr from_prof(const ProfPtr& pp) {
  return from_prof(pp, from_fincat(pp->source()), from_fincat(pp->target()));
}

Cell to_cell(const InternalTransformation& t) {
  Cell c{to_prof(*t.source), to_prof(*t.target), to_functor(t.left), to_functor(t.right), {},
         t.name};
  for (auto x : t.phi.values) c.map.push_back(static_cast<ElemId>(x));
  return c;
}

InternalTransformation from_cell(const Cell& c, const IProfPtr& source, const IProfPtr& target) {
  InternalTransformation t{source, target, from_functor(c.left, source->source, target->source),
                           from_functor(c.right, source->target, target->target),
                           Map{c.map.size(), target->size(), {}}, c.name};
  for (auto x : c.map) t.phi.values.push_back(static_cast<std::size_t>(x));
  return t;
}

bool composition_coherent(const IProfPtr& j, const IProfPtr& h) {
  const auto internal = internal_prof_compose(j, h);
  const auto fin = compose_prof(to_prof(*j), to_prof(*h));
  const auto& ip = *internal.prof;
  const auto& fp = *fin.prof;
  if (ip.size() != fp.num_elements()) return false;
  std::vector<ElemId> to(ip.size());
  std::vector<char> hit(fp.num_elements(), 0);
  for (std::size_t c = 0; c < ip.size(); ++c) {
    const auto [x, y] = internal.pairs.pairs[internal.quotient.reps[c]];
    to[c] = fin.cls(static_cast<ElemId>(x), static_cast<ElemId>(y));
    if (to[c] == kNone || hit[to[c]]) return false;
    hit[to[c]] = 1;
    const auto& e = fp.element(to[c]);
    if (static_cast<std::size_t>(e.a) != ip.span.d0(c) ||
        static_cast<std::size_t>(e.b) != ip.span.d1(c)) {
      return false;
    }
  }
  for (const auto& [u, c] : ip.left_pairs.pairs) {
    if (to[ip.left(u, c)] != fp.left(static_cast<ArrowId>(u), to[c])) return false;
  }
  for (const auto& [c, v] : ip.right_pairs.pairs) {
    if (to[ip.right(c, v)] != fp.right(static_cast<ArrowId>(v), to[c])) return false;
  }
  return true;
}

// --- tabulation --------------------------------------------------------------

InternalTabulation internal_tabulate(const IProfPtr& jp, const Host& host) {
  const auto chk = validate_profunctor(*jp);
  if (!chk.ok()) throw ActionIncompatible(chk.violations.front());
  const auto& j = *jp;
  const auto& a = *j.source;
  const auto& b = *j.target;
  InternalTabulation t;
  t.of = jp;
  t.right_side = host.pullback(j.span.d1, b.span.d0);
  t.left_side = host.pullback(a.span.d1, j.span.d0);
  if (t.right_side.pairs != j.right_pairs.pairs || t.left_side.pairs != j.left_pairs.pairs) {
    throw InternalInvariant("internal tabulation: action domains are not canonical");
  }
  const auto& rb = t.right_side;
  const auto& al = t.left_side;
  t.squares = host.pullback(j.r, j.l);
  const auto& sq = t.squares;
  const auto d0 = compose(rb.p1, sq.p1);
  const auto d1 = compose(al.p2, sq.p2);
  t.w = host.pullback(d1, d0);
  const auto& w = t.w;

  // W -> (1) x (3) -> J x B and W -> (2) x (4) -> A x J.
  const auto first_x = compose(sq.p1, w.p1);
  const auto second_x = compose(sq.p1, w.p2);
  const auto first_y = compose(sq.p2, w.p1);
  const auto second_y = compose(sq.p2, w.p2);
  const auto vb = compose(b.m, host.induce(b.composable, compose(rb.p2, first_x),
                                           compose(rb.p2, second_x)));
  const auto to_right = host.induce(rb, compose(rb.p1, first_x), vb);
  const auto ua = compose(a.m, host.induce(a.composable, compose(al.p1, first_y),
                                           compose(al.p1, second_y)));
  const auto to_left = host.induce(al, ua, compose(al.p2, second_y));
  const auto m = host.induce(sq, to_right, to_left);

  const auto n = j.size();
  const auto ex = host.induce(rb, identity_map(n), compose(b.e, j.span.d1));
  const auto ey = host.induce(al, compose(a.e, j.span.d0), identity_map(n));
  const auto e = host.induce(sq, ex, ey);

  InternalCategory total;
  total.name = "<" + j.name + ">";
  total.object_names = j.element_names;
  for (const auto& [x, y] : sq.pairs) {
    const auto [j1, v] = rb.pairs[x];
    const auto [u, j2] = al.pairs[y];
    total.arrow_names.push_back("((" + j.element_names[j1] + "," + b.arrow_names[v] + "),(" +
                                a.arrow_names[u] + "," + j.element_names[j2] + "))");
  }
  total.span = Span{n, n, sq.size(), d0, d1};
  total.composable = w;
  total.m = m;
  total.e = e;
  const auto crep = validate_category(total);
  if (!crep.ok()) throw InternalInvariant("internal tabulation: " + crep.violations.front());
  t.total = std::make_shared<const InternalCategory>(std::move(total));

  t.proj_a = InternalFunctor{t.total, j.source, j.span.d0, compose(al.p1, sq.p2), "pi_A"};
  t.proj_b = InternalFunctor{t.total, j.target, j.span.d1, compose(rb.p2, sq.p1), "pi_B"};
  t.pi = InternalTransformation{unit_profunctor(t.total), jp, t.proj_a, t.proj_b,
                                compose(j.r, sq.p1), "pi"};
  for (const auto& rep : {validate_functor(t.proj_a), validate_functor(t.proj_b),
                          validate_transformation(t.pi)}) {
    if (!rep.ok()) throw InternalInvariant("internal tabulation: " + rep.violations.front());
  }
  return t;
}

namespace {

/// Internal functors to <J> from fincat functors, with their object maps.
struct Lift {
  Functor fin;
  InternalFunctor internal;
};

std::vector<Lift> lifts(const ICatPtr& x, const CatPtr& xc, const InternalTabulation& t,
                        const CatPtr& tc) {
  std::vector<Lift> out;
  for (auto& f : all_functors(xc, tc)) {
    auto g = from_functor(f, x, t.total);
    out.push_back({std::move(f), std::move(g)});
  }
  return out;
}

struct HJob {
  std::size_t x, y;
  IProfPtr h;
  std::string label;
};

std::vector<HJob> horizontal_probes(const std::vector<ICatPtr>& probes,
                                    const std::vector<CatPtr>& fin) {
  std::vector<HJob> jobs;
  for (std::size_t xi = 0; xi < probes.size(); ++xi) {
    for (std::size_t yi = 0; yi < probes.size(); ++yi) {
      if (xi == yi) jobs.push_back({xi, yi, unit_profunctor(probes[xi]), "1"});
      for (const auto& f : all_functors(fin[xi], fin[yi])) {
        jobs.push_back({xi, yi, from_prof(companion_unchecked(f).prof, probes[xi], probes[yi]),
                        "f_*"});
      }
      for (const auto& f : all_functors(fin[yi], fin[xi])) {
        jobs.push_back({xi, yi, from_prof(conjoint_unchecked(f).prof, probes[xi], probes[yi]),
                        "f^*"});
      }
    }
  }
  return jobs;
}

}  // namespace

InternalTabulationReport verify_internal_tabulation(const InternalTabulation& t,
                                                    const std::vector<ICatPtr>& given) {
  InternalTabulationReport rep;
  auto fail = [&](bool& flag, const std::string& w) {
    flag = false;
    if (rep.witness.empty()) rep.witness = w;
  };
  for (const auto& v : {validate_category(*t.total), validate_functor(t.proj_a),
                        validate_functor(t.proj_b), validate_transformation(t.pi)}) {
    if (!v.ok()) {
      fail(rep.valid, v.violations.front());
      return rep;
    }
  }
  std::vector<ICatPtr> probes = given;
  if (probes.empty()) {
    probes = {from_fincat(one_category()), from_fincat(two_category()),
              from_fincat(parallel_pair())};
  }
  const auto& host = finset();
  const auto& j = *t.of;
  const auto& a = t.of->source;
  const auto& b = t.of->target;
  const auto jf = to_prof(j);
  const auto af = jf->source();
  const auto bf = jf->target();
  const auto tf = to_fincat(*t.total);
  const auto homa = hom_profunctor(af);
  const auto homb = hom_profunctor(bf);
  const auto homt = hom_profunctor(tf);
  std::vector<CatPtr> fin;
  for (const auto& p : probes) fin.push_back(to_fincat(*p));
  std::vector<std::vector<Lift>> into;
  for (std::size_t i = 0; i < probes.size(); ++i) into.push_back(lifts(probes[i], fin[i], t, tf));

  const auto square = [&](std::size_t jx, std::size_t v, std::size_t u, std::size_t jy) {
    const auto x = t.right_side.at(jx, v);
    const auto y = t.left_side.at(u, jy);
    if (x == Pullback::npos || y == Pullback::npos) return Pullback::npos;
    return t.squares.at(x, y);
  };

  // 1-dimensional property.
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto& x = probes[i];
    const auto unit = unit_profunctor(x);
    const auto homx = hom_profunctor(fin[i]);
    for (const auto& fa : all_functors(fin[i], af)) {
      for (const auto& fb : all_functors(fin[i], bf)) {
        for (const auto& cell : all_cells(homx, jf, fa, fb)) {
          ++rep.checked_one;
          InternalTransformation phi{unit, t.of, from_functor(fa, x, a), from_functor(fb, x, b),
                                     Map{x->num_arrows(), j.size(), {}}, "phi"};
          for (auto e : cell.map) phi.phi.values.push_back(static_cast<std::size_t>(e));
          if (!validate_transformation(phi).ok()) {
            fail(rep.one_dimensional, "bridged cell is not an internal transformation");
            continue;
          }
          const auto p0 = compose(phi.phi, x->e);
          InternalFunctor lift{x, t.total, p0, Map{x->num_arrows(), t.total->num_arrows(), {}},
                               "phi'"};
          bool built = true;
          for (std::size_t u = 0; u < x->num_arrows(); ++u) {
            const auto s = square(p0(x->span.d0(u)), phi.right.f1(u), phi.left.f1(u),
                                  p0(x->span.d1(u)));
            if (s == Pullback::npos) {
              built = false;
              break;
            }
            lift.f1.values.push_back(s);
          }
          if (!built || !validate_functor(lift).ok() ||
              compose(t.pi.phi, lift.f1) != phi.phi ||
              compose(t.proj_a.f1, lift.f1) != phi.left.f1 ||
              compose(t.proj_b.f1, lift.f1) != phi.right.f1 ||
              compose(t.proj_a.f0, lift.f0) != phi.left.f0 ||
              compose(t.proj_b.f0, lift.f0) != phi.right.f0) {
            fail(rep.one_dimensional, "X=" + x->name + ": the factorisation phi' fails");
            continue;
          }
          std::size_t matches = 0;
          bool same = false;
          for (const auto& l : into[i]) {
            const auto& g = l.internal;
            if (compose(t.pi.phi, g.f1) == phi.phi && compose(t.proj_a.f1, g.f1) == phi.left.f1 &&
                compose(t.proj_b.f1, g.f1) == phi.right.f1) {
              ++matches;
              same = g.f0 == lift.f0 && g.f1 == lift.f1;
            }
          }
          if (matches != 1 || !same) {
            fail(rep.one_dimensional, "X=" + x->name + ": factorisation is not unique");
          }
        }
      }
    }
  }

  // 2-dimensional property.
  const auto jobs = horizontal_probes(probes, fin);
  const auto unit_total = unit_profunctor(t.total);
  const auto pa_fin = to_functor(t.proj_a);
  const auto pb_fin = to_functor(t.proj_b);
  struct TwoOut {
    std::size_t checked = 0;
    std::string witness;
  };
  const auto two = parallel::map_indexed(jobs.size(), [&](std::size_t ji) {
    const auto& job = jobs[ji];
    const auto& h = *job.h;
    const auto hf = to_prof(h);
    TwoOut o;
    for (const auto& phi : into[job.x]) {
      const auto phia = dcat::compose(pa_fin, phi.fin);
      const auto phib = dcat::compose(pb_fin, phi.fin);
      for (const auto& psi : into[job.y]) {
        const auto psia = dcat::compose(pa_fin, psi.fin);
        const auto psib = dcat::compose(pb_fin, psi.fin);
        std::vector<std::vector<ElemId>> xas;
        std::vector<std::vector<ElemId>> xbs;
        for_each_cell_map(hf, homa, phia, psia, [&](const auto& m) { xas.push_back(m); });
        for_each_cell_map(hf, homb, phib, psib, [&](const auto& m) { xbs.push_back(m); });
        std::map<std::vector<ElemId>, std::size_t> index_a;
        std::map<std::vector<ElemId>, std::size_t> index_b;
        for (std::size_t i = 0; i < xas.size(); ++i) index_a.emplace(xas[i], i);
        for (std::size_t i = 0; i < xbs.size(); ++i) index_b.emplace(xbs[i], i);
        // lifts_of[ia * |xbs| + ib]; pairs outside both enumerations count as stray.
        std::vector<std::size_t> lifts_of(xas.size() * xbs.size(), 0);
        std::vector<ElemId> pa(h.size());
        std::vector<ElemId> pb(h.size());
        for_each_cell_map(hf, homt, phi.fin, psi.fin, [&](const std::vector<ElemId>& m) {
          for (std::size_t e = 0; e < m.size(); ++e) {
            pa[e] = static_cast<ElemId>(t.proj_a.f1(static_cast<std::size_t>(m[e])));
            pb[e] = static_cast<ElemId>(t.proj_b.f1(static_cast<std::size_t>(m[e])));
          }
          const auto ia = index_a.find(pa);
          const auto ib = index_b.find(pb);
          if (ia == index_a.end() || ib == index_b.end()) {
            if (o.witness.empty()) o.witness = "a lift projects outside the cells";
            return;
          }
          ++lifts_of[ia->second * xbs.size() + ib->second];
        });
        for (std::size_t ia = 0; ia < xas.size(); ++ia) {
          const auto& xa = xas[ia];
          for (std::size_t ib = 0; ib < xbs.size(); ++ib) {
            const auto& xb = xbs[ib];
            bool holds = true;
            for (std::size_t e = 0; e < h.size() && holds; ++e) {
              const auto at_x = phi.internal.f0(h.span.d0(e));
              const auto at_y = psi.internal.f0(h.span.d1(e));
              holds = j.right(at_x, static_cast<std::size_t>(xb[e])) ==
                      j.left(static_cast<std::size_t>(xa[e]), at_y);
            }
            const std::size_t found = lifts_of[ia * xbs.size() + ib];
            if (!holds) {
              if (found != 0 && o.witness.empty()) o.witness = "a lift exists without the identity";
              continue;
            }
            ++o.checked;
            InternalTransformation lift{job.h, unit_total, phi.internal,
                                        psi.internal, Map{h.size(), t.total->num_arrows(), {}},
                                        "xi'"};
            bool built = true;
            for (std::size_t e = 0; e < h.size(); ++e) {
              const auto s = square(phi.internal.f0(h.span.d0(e)),
                                    static_cast<std::size_t>(xb[e]),
                                    static_cast<std::size_t>(xa[e]),
                                    psi.internal.f0(h.span.d1(e)));
              if (s == Pullback::npos) {
                built = false;
                break;
              }
              lift.phi.values.push_back(s);
            }
            if (!built || !validate_transformation(lift).ok()) {
              if (o.witness.empty()) o.witness = "H=" + job.label + ": the lift xi' is not natural";
              continue;
            }
            if (found != 1 && o.witness.empty()) {
              o.witness = "X=" + probes[job.x]->name + " Y=" + probes[job.y]->name + " H=" +
                          job.label + ": " + std::to_string(found) + " lifts";
            }
          }
        }
      }
    }
    return o;
  });
  for (const auto& o : two) {
    rep.checked_two += o.checked;
    if (!o.witness.empty()) fail(rep.two_dimensional, o.witness);
  }

  // Opcartesian: chi |-> chi . e is inverse to chi' |-> chi' . pi.
  if (compose(t.pi.phi, t.total->e) != identity_map(j.size())) {
    fail(rep.opcartesian, "pi . e is not the identity");
  }
  struct OJob {
    ICatPtr c, d;
    CatPtr cf, df;
    Functor f, g;
    IProfPtr k;
  };
  std::vector<OJob> ojobs;
  ojobs.push_back({a, b, af, bf, dcat::identity_functor(af), dcat::identity_functor(bf), t.of});
  for (const auto& hj : jobs) {
    for (const auto& f : all_functors(af, fin[hj.x])) {
      for (const auto& g : all_functors(bf, fin[hj.y])) {
        ojobs.push_back({probes[hj.x], probes[hj.y], fin[hj.x], fin[hj.y], f, g, hj.h});
      }
    }
  }
  const auto op = parallel::map_indexed(ojobs.size(), [&](std::size_t oi) {
    const auto& job = ojobs[oi];
    const auto kf = to_prof(*job.k);
    TwoOut o;
    const auto fi = from_functor(job.f, a, job.c);
    const auto gi = from_functor(job.g, b, job.d);
    const auto chis = all_cells(homt, kf, dcat::compose(job.f, pa_fin), dcat::compose(job.g, pb_fin));
    const auto primes = all_cells(jf, kf, job.f, job.g);
    for (const auto& chi : chis) {
      ++o.checked;
      Map cm{chi.map.size(), job.k->size(), {}};
      for (auto x : chi.map) cm.values.push_back(static_cast<std::size_t>(x));
      InternalTransformation prime{t.of, job.k, fi, gi, compose(cm, t.total->e), "chi'"};
      if (!validate_transformation(prime).ok() || compose(prime.phi, t.pi.phi) != cm) {
        if (o.witness.empty()) o.witness = "chi . e does not factor chi";
      }
    }
    if (primes.size() != chis.size() && o.witness.empty()) {
      o.witness = "factorisations and cells out of <J> differ in number";
    }
    return o;
  });
  for (const auto& o : op) {
    rep.checked_opcartesian += o.checked;
    if (!o.witness.empty()) fail(rep.opcartesian, o.witness);
  }
  (void)host;
  return rep;
}

// --- vertical transformations ------------------------------------------------

Map components_of(const InternalTransformation& phi) {
  return compose(phi.phi, phi.left.source->e);
}

InternalTransformation transformation_of(const Map& phi0, const InternalFunctor& f,
                                         const InternalFunctor& g, const IProfPtr& kp) {
  const auto& a = *f.source;
  const auto& k = *kp;
  if (!shape(phi0, a.num_objects(), k.size())) {
    throw BoundaryMismatch("component cell has the wrong shape");
  }
  Map phi{a.num_arrows(), k.size(), {}};
  for (std::size_t u = 0; u < a.num_arrows(); ++u) {
    const auto lp = k.left_pairs.at(f.f1(u), phi0(a.span.d1(u)));
    const auto rp = k.right_pairs.at(phi0(a.span.d0(u)), g.f1(u));
    if (lp == Pullback::npos || rp == Pullback::npos) {
      throw NaturalityFailure("component cell has the wrong ends at " + a.arrow_names[u]);
    }
    if (k.l(lp) != k.r(rp)) {
      throw NaturalityFailure("square condition fails at " + a.arrow_names[u]);
    }
    phi.values.push_back(k.l(lp));
  }
  InternalTransformation t{unit_profunctor(f.source), kp, f, g, std::move(phi), "phi"};
  const auto rep = validate_transformation(t);
  if (!rep.ok()) throw NaturalityFailure(rep.violations.front());
  return t;
}

}  // namespace dcat::span
