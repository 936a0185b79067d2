#include "dcat/prof.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "detail.hpp"

namespace dcat {

// --- profunctors -----------------------------------------------------------

Profunctor::Profunctor(std::string name, CatPtr source, CatPtr target,
                       std::vector<Element> elements, std::vector<ElemId> table)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      elements_(std::move(elements)),
      table_(std::move(table)) {
  const auto na = source_->num_objects();
  const auto nb = target_->num_objects();
  const auto ne = elements_.size();
  if (table_.size() != source_->num_arrows() * ne * target_->num_arrows()) {
    throw ValidationError("profunctor " + name_ + ": action table has the wrong size");
  }
  for (const auto& e : elements_) {
    if (e.a < 0 || e.b < 0 || static_cast<std::size_t>(e.a) >= na ||
        static_cast<std::size_t>(e.b) >= nb) {
      throw ValidationError("profunctor " + name_ + ": element " + e.name +
                            " has no valid endpoints");
    }
  }
  for (auto x : table_) {
    if (x != kNone && (x < 0 || static_cast<std::size_t>(x) >= ne)) {
      throw ValidationError("profunctor " + name_ + ": action result out of range");
    }
  }
  fibers_.assign(na * nb, {});
  from_.assign(na, {});
  into_.assign(nb, {});
  for (std::size_t j = 0; j < ne; ++j) {
    fibers_[static_cast<std::size_t>(elements_[j].a) * nb + elements_[j].b].push_back(
        static_cast<ElemId>(j));
  }
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& f = fibers_[a * nb + b];
      from_[a].insert(from_[a].end(), f.begin(), f.end());
    }
  }
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t a = 0; a < na; ++a) {
      const auto& f = fibers_[a * nb + b];
      into_[b].insert(into_[b].end(), f.begin(), f.end());
    }
  }
}

ProfPtr Profunctor::from_action(std::string name, CatPtr source, CatPtr target,
                                std::vector<Element> elements, const ActFn& act) {
  const auto& a = *source;
  const auto& b = *target;
  const auto ne = elements.size();
  std::vector<ElemId> table(a.num_arrows() * ne * b.num_arrows(), kNone);
  for (std::size_t j = 0; j < ne; ++j) {
    for (auto u : a.arrows_into(elements[j].a)) {
      for (auto v : b.arrows_from(elements[j].b)) {
        table[(static_cast<std::size_t>(u) * ne + j) * b.num_arrows() + v] =
            act(u, static_cast<ElemId>(j), v);
      }
    }
  }
  return std::make_shared<const Profunctor>(std::move(name), std::move(source), std::move(target),
                                            std::move(elements), std::move(table));
}

std::optional<ElemId> Profunctor::find_element(const std::string& name) const {
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    if (elements_[j].name == name) return static_cast<ElemId>(j);
  }
  return std::nullopt;
}

bool operator==(const Profunctor& x, const Profunctor& y) {
  if (!same_category(x.source_, y.source_) || !same_category(x.target_, y.target_)) return false;
  if (x.elements_.size() != y.elements_.size() || x.table_ != y.table_) return false;
  for (std::size_t j = 0; j < x.elements_.size(); ++j) {
    const auto& p = x.elements_[j];
    const auto& q = y.elements_[j];
    if (p.name != q.name || p.a != q.a || p.b != q.b) return false;
  }
  return true;
}

bool same_prof(const ProfPtr& x, const ProfPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  return *x == *y;
}

ValidationReport validate_profunctor(const Profunctor& p) {
  ValidationReport r;
  const auto& a = *p.source();
  const auto& b = *p.target();
  const auto ne = p.num_elements();
  auto triple = [&](ArrowId u, ElemId j, ArrowId v) {
    return "(" + b.arrow(v).name + " . " + p.element(j).name + " . " + a.arrow(u).name + ")";
  };
  for (std::size_t ji = 0; ji < ne; ++ji) {
    const auto j = static_cast<ElemId>(ji);
    const auto& e = p.element(j);
    for (std::size_t ui = 0; ui < a.num_arrows(); ++ui) {
      for (std::size_t vi = 0; vi < b.num_arrows(); ++vi) {
        const auto u = static_cast<ArrowId>(ui);
        const auto v = static_cast<ArrowId>(vi);
        const auto x = p.act(u, j, v);
        const bool shaped = a.target(u) == e.a && b.source(v) == e.b;
        if (!shaped) {
          if (x != kNone) r.violations.push_back("ill-shaped action " + triple(u, j, v) + " defined");
          continue;
        }
        if (x == kNone) {
          r.violations.push_back("action not total: missing " + triple(u, j, v));
        } else if (p.element(x).a != a.source(u) || p.element(x).b != b.target(v)) {
          r.violations.push_back("action " + triple(u, j, v) + " = " + p.element(x).name +
                                 " lands in the wrong fibre");
        }
      }
    }
  }
  if (!r.ok()) return r;
  for (std::size_t ji = 0; ji < ne; ++ji) {
    const auto j = static_cast<ElemId>(ji);
    const auto& e = p.element(j);
    const auto ida = a.identity(e.a);
    const auto idb = b.identity(e.b);
    if (p.act(ida, j, idb) != j) {
      r.violations.push_back("identity action fails on " + triple(ida, j, idb));
    }
    for (auto u : a.arrows_into(e.a)) {
      for (auto v : b.arrows_from(e.b)) {
        const auto x = p.act(u, j, v);
        if (x != p.left(u, p.right(v, j)) || x != p.right(v, p.left(u, j))) {
          r.violations.push_back("functoriality fails on " + triple(u, j, v));
        }
      }
      for (auto u2 : a.arrows_into(a.source(u))) {
        if (p.left(a.compose(u, u2), j) != p.left(u2, p.left(u, j))) {
          r.violations.push_back("functoriality fails on " + triple(a.compose(u, u2), j, idb) +
                                 " with " + a.arrow(a.compose(u, u2)).name + " = " +
                                 a.arrow(u).name + " . " + a.arrow(u2).name);
        }
      }
    }
    for (auto v : b.arrows_from(e.b)) {
      for (auto v2 : b.arrows_from(b.target(v))) {
        if (p.right(b.compose(v2, v), j) != p.right(v2, p.right(v, j))) {
          r.violations.push_back("functoriality fails on " + triple(ida, j, b.compose(v2, v)) +
                                 " with " + b.arrow(b.compose(v2, v)).name + " = " +
                                 b.arrow(v2).name + " . " + b.arrow(v).name);
        }
      }
    }
  }
  return r;
}

ProfunctorBuilder& ProfunctorBuilder::element(const std::string& name, const std::string& a,
                                              const std::string& b) {
  auto oa = source_->find_object(a);
  auto ob = target_->find_object(b);
  if (!oa) throw ValidationError("profunctor " + name_ + ": unknown object " + a);
  if (!ob) throw ValidationError("profunctor " + name_ + ": unknown object " + b);
  elements_.push_back({name, *oa, *ob});
  return *this;
}

ProfunctorBuilder& ProfunctorBuilder::act(const std::string& v, const std::string& j,
                                          const std::string& u, const std::string& j2) {
  entries_.push_back({v, j, u, j2});
  return *this;
}

ProfPtr ProfunctorBuilder::build() const { return assemble(true); }
ProfPtr ProfunctorBuilder::build_unchecked() const { return assemble(false); }

ProfPtr ProfunctorBuilder::assemble(bool check) const {
  const auto& a = *source_;
  const auto& b = *target_;
  const auto ne = elements_.size();
  auto find_elem = [&](const std::string& n) -> ElemId {
    for (std::size_t j = 0; j < ne; ++j) {
      if (elements_[j].name == n) return static_cast<ElemId>(j);
    }
    throw ValidationError("profunctor " + name_ + ": unknown element " + n);
  };
  std::vector<ElemId> table(a.num_arrows() * ne * b.num_arrows(), kNone);
  auto index = [&](ArrowId u, ElemId j, ArrowId v) {
    return (static_cast<std::size_t>(u) * ne + j) * b.num_arrows() + v;
  };
  for (std::size_t j = 0; j < ne; ++j) {
    table[index(a.identity(elements_[j].a), static_cast<ElemId>(j),
                b.identity(elements_[j].b))] = static_cast<ElemId>(j);
  }
  for (const auto& e : entries_) {
    auto u = a.find_arrow(e.u);
    auto v = b.find_arrow(e.v);
    if (!u) throw ValidationError("profunctor " + name_ + ": unknown arrow " + e.u);
    if (!v) throw ValidationError("profunctor " + name_ + ": unknown arrow " + e.v);
    const auto j = find_elem(e.j);
    const auto j2 = find_elem(e.j2);
    if (a.target(*u) != elements_[j].a || b.source(*v) != elements_[j].b) {
      throw ValidationError("profunctor " + name_ + ": act " + e.v + " . " + e.j + " . " + e.u +
                            " is ill-shaped");
    }
    table[index(*u, j, *v)] = j2;
  }
  auto p = std::make_shared<const Profunctor>(name_, source_, target_, elements_, std::move(table));
  if (check) {
    auto report = validate_profunctor(*p);
    if (!report.ok()) {
      throw ValidationError("profunctor " + name_ + ": " + report.violations.front());
    }
  }
  return p;
}

ProfPtr hom_profunctor(const CatPtr& a) {
  std::vector<Profunctor::Element> elements;
  for (const auto& f : a->arrows()) elements.push_back({f.name, f.source, f.target});
  const auto& c = *a;
  return Profunctor::from_action("1_" + a->name(), a, a, std::move(elements),
                                 [&](ArrowId u, ElemId j, ArrowId v) {
                                   return c.compose(v, c.compose(j, u));
                                 });
}

ProfPtr empty_profunctor(const CatPtr& a, const CatPtr& b) {
  return std::make_shared<const Profunctor>("0", a, b, std::vector<Profunctor::Element>{},
                                            std::vector<ElemId>{});
}

// --- cells -----------------------------------------------------------------

bool operator==(const Cell& x, const Cell& y) {
  return x.map == y.map && same_prof(x.source, y.source) && same_prof(x.target, y.target) &&
         x.left == y.left && x.right == y.right;
}

ValidationReport validate_cell(const Cell& c) {
  ValidationReport r;
  const auto& j = *c.source;
  const auto& k = *c.target;
  if (!same_category(c.left.source, j.source()) || !same_category(c.left.target, k.source()) ||
      !same_category(c.right.source, j.target()) || !same_category(c.right.target, k.target())) {
    r.violations.push_back("cell " + c.name + ": vertical boundary does not match");
    return r;
  }
  if (c.map.size() != j.num_elements()) {
    r.violations.push_back("cell " + c.name + ": one component per element required");
    return r;
  }
  for (std::size_t xi = 0; xi < j.num_elements(); ++xi) {
    const auto x = static_cast<ElemId>(xi);
    const auto y = c.map[xi];
    const auto& e = j.element(x);
    if (y < 0 || static_cast<std::size_t>(y) >= k.num_elements() ||
        k.element(y).a != c.left.obj(e.a) || k.element(y).b != c.right.obj(e.b)) {
      r.violations.push_back("cell " + c.name + ": component at " + e.name + " is ill-typed");
    }
  }
  if (!r.ok()) return r;
  const auto& a = *j.source();
  const auto& b = *j.target();
  for (std::size_t xi = 0; xi < j.num_elements(); ++xi) {
    const auto x = static_cast<ElemId>(xi);
    const auto& e = j.element(x);
    for (auto u : a.arrows_into(e.a)) {
      for (auto v : b.arrows_from(e.b)) {
        if (c.map[j.act(u, x, v)] != k.act(c.left.arr(u), c.map[xi], c.right.arr(v))) {
          r.violations.push_back("cell " + c.name + ": naturality fails at (" + b.arrow(v).name +
                                 " . " + e.name + " . " + a.arrow(u).name + ")");
        }
      }
    }
  }
  return r;
}

Cell identity_cell(const ProfPtr& j) {
  Cell c{j, j, identity_functor(j->source()), identity_functor(j->target()), {}, "id_" + j->name()};
  c.map.resize(j->num_elements());
  std::iota(c.map.begin(), c.map.end(), 0);
  return c;
}

Cell unit_cell(const Functor& f) {
  return Cell{hom_profunctor(f.source), hom_profunctor(f.target), f, f, f.on_arrows,
              "1_" + f.name};
}

Cell vcompose(const Cell& top, const Cell& bottom) {
  if (!same_prof(top.target, bottom.source)) {
    throw BoundaryMismatch("vertical composite of " + top.name + " and " + bottom.name +
                           " needs a shared horizontal edge");
  }
  Cell c{top.source, bottom.target, compose(bottom.left, top.left),
         compose(bottom.right, top.right), {}, {}};
  c.map.reserve(top.map.size());
  for (auto x : top.map) c.map.push_back(bottom.map[x]);
  return c;
}

void for_each_cell_map(const ProfPtr& jp, const ProfPtr& kp, const Functor& f, const Functor& g,
                       const std::function<void(const std::vector<ElemId>&)>& visit) {
  if (!same_category(f.source, jp->source()) || !same_category(f.target, kp->source()) ||
      !same_category(g.source, jp->target()) || !same_category(g.target, kp->target())) {
    throw BoundaryMismatch("cells " + jp->name() + " => " + kp->name() +
                           ": vertical boundary does not match");
  }
  const auto& j = *jp;
  const auto& k = *kp;
  const auto& a = *j.source();
  const auto& b = *j.target();
  const auto ne = j.num_elements();
  std::vector<ElemId> value(ne, kNone);
  std::vector<ElemId> trail;

  // Assigns x |-> y and everything forced by naturality; false on conflict.
  std::vector<ElemId> stack;
  auto assign = [&](ElemId x, ElemId y) {
    stack.clear();
    stack.push_back(x);
    value[x] = y;
    trail.push_back(x);
    while (!stack.empty()) {
      const auto p = stack.back();
      stack.pop_back();
      const auto& e = j.element(p);
      for (auto u : a.arrows_into(e.a)) {
        for (auto v : b.arrows_from(e.b)) {
          const auto q = j.act(u, p, v);
          const auto w = k.act(f.arr(u), value[p], g.arr(v));
          if (value[q] == kNone) {
            value[q] = w;
            trail.push_back(q);
            stack.push_back(q);
          } else if (value[q] != w) {
            return false;
          }
        }
      }
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      value[trail.back()] = kNone;
      trail.pop_back();
    }
  };
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    std::size_t x = start;
    while (x < ne && value[x] != kNone) ++x;
    if (x == ne) {
      visit(value);
      return;
    }
    const auto& e = j.element(static_cast<ElemId>(x));
    for (auto y : k.fiber(f.obj(e.a), g.obj(e.b))) {
      const auto mark = trail.size();
      if (assign(static_cast<ElemId>(x), y)) rec(x + 1);
      undo(mark);
    }
  };
  rec(0);
}

std::vector<Cell> all_cells(const ProfPtr& jp, const ProfPtr& kp, const Functor& f,
                            const Functor& g) {
  std::vector<Cell> out;
  for_each_cell_map(jp, kp, f, g,
                    [&](const std::vector<ElemId>& m) { out.push_back(Cell{jp, kp, f, g, m, {}}); });
  return out;
}

// --- composition -------------------------------------------------------------

Composite compose_prof(const ProfPtr& jp, const ProfPtr& hp) {
  if (!same_category(jp->target(), hp->source())) {
    throw BoundaryMismatch("cannot compose " + jp->name() + " with " + hp->name());
  }
  const auto& j = *jp;
  const auto& h = *hp;
  const auto& a = *j.source();
  const auto& b = *j.target();
  const auto& e = *h.target();
  const auto nj = j.num_elements();
  const auto nh = h.num_elements();
  detail::UnionFind uf(nj * nh);
  for (std::size_t xi = 0; xi < nj; ++xi) {
    const auto x = static_cast<ElemId>(xi);
    for (auto v : b.arrows_from(j.element(x).b)) {
      const auto xv = j.right(v, x);
      for (auto y : h.from(b.target(v))) {
        uf.unite(static_cast<std::size_t>(xv) * nh + y, xi * nh + h.left(v, y));
      }
    }
  }
  Composite c;
  c.left = jp;
  c.right = hp;
  c.classes.assign(nj * nh, kNone);
  std::vector<Profunctor::Element> elements;
  std::vector<ElemId> root_class(nj * nh, kNone);
  for (std::size_t oa = 0; oa < a.num_objects(); ++oa) {
    for (std::size_t oe = 0; oe < e.num_objects(); ++oe) {
      for (std::size_t ob = 0; ob < b.num_objects(); ++ob) {
        for (auto x : j.fiber(static_cast<ObjectId>(oa), static_cast<ObjectId>(ob))) {
          for (auto y : h.fiber(static_cast<ObjectId>(ob), static_cast<ObjectId>(oe))) {
            const auto p = static_cast<std::size_t>(x) * nh + y;
            const auto root = uf.find(p);
            if (root_class[root] == kNone) {
              root_class[root] = static_cast<ElemId>(elements.size());
              elements.push_back({"[" + j.element(x).name + "|" + h.element(y).name + "]",
                                  static_cast<ObjectId>(oa), static_cast<ObjectId>(oe)});
              c.reps.emplace_back(x, y);
            }
            c.classes[p] = root_class[root];
          }
        }
      }
    }
  }
  const auto& cr = c;
  c.prof = Profunctor::from_action(
      j.name() + "(.)" + h.name(), j.source(), h.target(), std::move(elements),
      [&](ArrowId u, ElemId z, ArrowId w) {
        const auto [x, y] = cr.reps[z];
        return cr.cls(j.left(u, x), h.right(w, y));
      });
  return c;
}

Cell hcompose(const Cell& phi, const Cell& chi) {
  if (!(phi.right == chi.left)) {
    throw BoundaryMismatch("horizontal composite of " + phi.name + " and " + chi.name +
                           " needs a shared vertical edge");
  }
  const auto src = compose_prof(phi.source, chi.source);
  const auto tgt = compose_prof(phi.target, chi.target);
  Cell c{src.prof, tgt.prof, phi.left, chi.right, {}, {}};
  c.map.reserve(src.reps.size());
  for (const auto& [x, y] : src.reps) c.map.push_back(tgt.cls(phi.map[x], chi.map[y]));
  return c;
}

Cell left_unitor(const ProfPtr& m) {
  const auto comp = compose_prof(hom_profunctor(m->source()), m);
  Cell c{comp.prof, m, identity_functor(m->source()), identity_functor(m->target()), {}, "l"};
  for (const auto& [u, x] : comp.reps) c.map.push_back(m->left(u, x));
  return c;
}

Cell left_unitor_inv(const ProfPtr& m) {
  const auto comp = compose_prof(hom_profunctor(m->source()), m);
  Cell c{m, comp.prof, identity_functor(m->source()), identity_functor(m->target()), {}, "l^-1"};
  for (std::size_t x = 0; x < m->num_elements(); ++x) {
    c.map.push_back(
        comp.cls(m->source()->identity(m->element(static_cast<ElemId>(x)).a), static_cast<ElemId>(x)));
  }
  return c;
}

Cell right_unitor(const ProfPtr& m) {
  const auto comp = compose_prof(m, hom_profunctor(m->target()));
  Cell c{comp.prof, m, identity_functor(m->source()), identity_functor(m->target()), {}, "r"};
  for (const auto& [x, v] : comp.reps) c.map.push_back(m->right(v, x));
  return c;
}

Cell right_unitor_inv(const ProfPtr& m) {
  const auto comp = compose_prof(m, hom_profunctor(m->target()));
  Cell c{m, comp.prof, identity_functor(m->source()), identity_functor(m->target()), {}, "r^-1"};
  for (std::size_t x = 0; x < m->num_elements(); ++x) {
    c.map.push_back(
        comp.cls(static_cast<ElemId>(x), m->target()->identity(m->element(static_cast<ElemId>(x)).b)));
  }
  return c;
}

Cell associator(const ProfPtr& j, const ProfPtr& h, const ProfPtr& k) {
  const auto jh = compose_prof(j, h);
  const auto lhs = compose_prof(jh.prof, k);
  const auto hk = compose_prof(h, k);
  const auto rhs = compose_prof(j, hk.prof);
  Cell c{lhs.prof, rhs.prof, identity_functor(j->source()), identity_functor(k->target()), {}, "a"};
  for (const auto& [z, w] : lhs.reps) {
    const auto [x, y] = jh.reps[z];
    c.map.push_back(rhs.cls(x, hk.cls(y, w)));
  }
  return c;
}

Cell associator_inv(const ProfPtr& j, const ProfPtr& h, const ProfPtr& k) {
  const auto jh = compose_prof(j, h);
  const auto lhs = compose_prof(jh.prof, k);
  const auto hk = compose_prof(h, k);
  const auto rhs = compose_prof(j, hk.prof);
  Cell c{rhs.prof, lhs.prof, identity_functor(j->source()), identity_functor(k->target()), {},
         "a^-1"};
  for (const auto& [x, z] : rhs.reps) {
    const auto [y, w] = hk.reps[z];
    c.map.push_back(lhs.cls(jh.cls(x, y), w));
  }
  return c;
}

// --- companions and conjoints ------------------------------------------------

Companion companion_unchecked(const Functor& f) {
  const auto& a = *f.source;
  const auto& c = *f.target;
  Companion out;
  std::vector<Profunctor::Element> elements;
  out.index.assign(a.num_objects(), std::vector<ElemId>(c.num_arrows(), kNone));
  for (std::size_t oa = 0; oa < a.num_objects(); ++oa) {
    const auto x = static_cast<ObjectId>(oa);
    for (std::size_t oc = 0; oc < c.num_objects(); ++oc) {
      for (auto u : c.hom(f.obj(x), static_cast<ObjectId>(oc))) {
        out.index[oa][u] = static_cast<ElemId>(elements.size());
        out.arrows.push_back(u);
        elements.push_back({"(" + a.object_name(x) + "," + c.arrow(u).name + ")", x,
                            static_cast<ObjectId>(oc)});
      }
    }
  }
  out.prof = Profunctor::from_action(
      f.name + "_*", f.source, f.target, elements, [&](ArrowId u2, ElemId j, ArrowId v) {
        return out.index[a.source(u2)][c.compose(v, c.compose(out.arrows[j], f.arr(u2)))];
      });
  out.epsilon = Cell{out.prof, hom_profunctor(f.target), f, identity_functor(f.target),
                     out.arrows, "eps_" + f.name};
  out.eta = Cell{hom_profunctor(f.source), out.prof, identity_functor(f.source), f, {},
                 "eta_" + f.name};
  for (std::size_t u = 0; u < a.num_arrows(); ++u) {
    out.eta.map.push_back(out.index[a.source(static_cast<ArrowId>(u))][f.arr(static_cast<ArrowId>(u))]);
  }
  return out;
}

Conjoint conjoint_unchecked(const Functor& f) {
  const auto& a = *f.source;
  const auto& c = *f.target;
  Conjoint out;
  std::vector<Profunctor::Element> elements;
  out.index.assign(a.num_objects(), std::vector<ElemId>(c.num_arrows(), kNone));
  for (std::size_t oc = 0; oc < c.num_objects(); ++oc) {
    for (std::size_t oa = 0; oa < a.num_objects(); ++oa) {
      const auto x = static_cast<ObjectId>(oa);
      for (auto u : c.hom(static_cast<ObjectId>(oc), f.obj(x))) {
        out.index[oa][u] = static_cast<ElemId>(elements.size());
        out.arrows.push_back(u);
        elements.push_back({"(" + c.arrow(u).name + "," + a.object_name(x) + ")",
                            static_cast<ObjectId>(oc), x});
      }
    }
  }
  out.prof = Profunctor::from_action(
      f.name + "^*", f.target, f.source, elements, [&](ArrowId v, ElemId j, ArrowId w) {
        return out.index[a.target(w)][c.compose(f.arr(w), c.compose(out.arrows[j], v))];
      });
  out.epsilon = Cell{out.prof, hom_profunctor(f.target), identity_functor(f.target), f,
                     out.arrows, "eps^" + f.name};
  out.eta = Cell{hom_profunctor(f.source), out.prof, f, identity_functor(f.source), {},
                 "eta^" + f.name};
  for (std::size_t u = 0; u < a.num_arrows(); ++u) {
    out.eta.map.push_back(out.index[a.target(static_cast<ArrowId>(u))][f.arr(static_cast<ArrowId>(u))]);
  }
  return out;
}

IdentityCheck check_companion(const Functor& f, const Companion& c) {
  IdentityCheck r;
  r.vertical = vcompose(c.eta, c.epsilon) == unit_cell(f);
  r.horizontal =
      vcompose(hcompose(c.eta, c.epsilon), right_unitor(c.prof)).map == left_unitor(c.prof).map;
  return r;
}

IdentityCheck check_conjoint(const Functor& f, const Conjoint& c) {
  IdentityCheck r;
  r.vertical = vcompose(c.eta, c.epsilon) == unit_cell(f);
  r.horizontal =
      vcompose(hcompose(c.epsilon, c.eta), left_unitor(c.prof)).map == right_unitor(c.prof).map;
  return r;
}

Companion companion(const Functor& f) {
  auto c = companion_unchecked(f);
  const auto chk = check_companion(f, c);
  if (!chk.vertical || !chk.horizontal) {
    throw InternalInvariant("companion identities fail for " + f.name);
  }
  return c;
}

Conjoint conjoint(const Functor& f) {
  auto c = conjoint_unchecked(f);
  const auto chk = check_conjoint(f, c);
  if (!chk.vertical || !chk.horizontal) {
    throw InternalInvariant("conjoint identities fail for " + f.name);
  }
  return c;
}

// --- restrictions and extensions --------------------------------------------

Restriction restrict(const ProfPtr& kp, const Functor& f, const Functor& g) {
  if (!same_category(f.target, kp->source()) || !same_category(g.target, kp->target())) {
    throw BoundaryMismatch("restriction of " + kp->name() + ": boundary does not match");
  }
  const auto& k = *kp;
  const auto& a = *f.source;
  const auto& b = *g.source;
  std::vector<Profunctor::Element> elements;
  std::vector<ElemId> under;
  std::map<std::tuple<ObjectId, ElemId, ObjectId>, ElemId> index;
  for (std::size_t oa = 0; oa < a.num_objects(); ++oa) {
    for (std::size_t ob = 0; ob < b.num_objects(); ++ob) {
      const auto x = static_cast<ObjectId>(oa);
      const auto y = static_cast<ObjectId>(ob);
      for (auto e : k.fiber(f.obj(x), g.obj(y))) {
        index[{x, e, y}] = static_cast<ElemId>(elements.size());
        under.push_back(e);
        elements.push_back({"(" + a.object_name(x) + "," + k.element(e).name + "," +
                                b.object_name(y) + ")",
                            x, y});
      }
    }
  }
  Restriction r;
  r.prof = Profunctor::from_action(
      kp->name() + "(" + f.name + "," + g.name + ")", f.source, g.source, elements,
      [&](ArrowId u, ElemId j, ArrowId v) {
        return index.at({a.source(u), k.act(f.arr(u), under[j], g.arr(v)), b.target(v)});
      });
  r.cartesian = Cell{r.prof, kp, f, g, under, "cart"};
  return r;
}

Extension extend(const ProfPtr& jp, const Functor& f, const Functor& g) {
  if (!same_category(f.source, jp->source()) || !same_category(g.source, jp->target())) {
    throw BoundaryMismatch("extension of " + jp->name() + ": boundary does not match");
  }
  const auto gs = companion_unchecked(g);
  const auto fs = conjoint_unchecked(f);
  Extension x;
  x.inner = compose_prof(jp, gs.prof);
  x.outer = compose_prof(fs.prof, x.inner.prof);
  x.prof = x.outer.prof;
  x.opcartesian = Cell{jp, x.prof, f, g, {}, "opcart"};
  const auto& c = *f.target;
  const auto& d = *g.target;
  for (std::size_t j = 0; j < jp->num_elements(); ++j) {
    const auto& e = jp->element(static_cast<ElemId>(j));
    const auto right = gs.element(e.b, d.identity(g.obj(e.b)));
    const auto left = fs.element(c.identity(f.obj(e.a)), e.a);
    x.opcartesian.map.push_back(x.outer.cls(left, x.inner.cls(static_cast<ElemId>(j), right)));
  }
  return x;
}

bool is_componentwise_bijective(const Cell& c) {
  const auto& j = *c.source;
  const auto& k = *c.target;
  if (j.num_elements() != k.num_elements()) return false;
  std::vector<char> hit(k.num_elements(), 0);
  for (auto y : c.map) {
    if (hit[y]) return false;
    hit[y] = 1;
  }
  return true;
}

bool is_cartesian(const Cell& phi) {
  const auto& j = *phi.source;
  const auto& k = *phi.target;
  const auto& a = *j.source();
  const auto& b = *j.target();
  for (std::size_t oa = 0; oa < a.num_objects(); ++oa) {
    for (std::size_t ob = 0; ob < b.num_objects(); ++ob) {
      const auto x = static_cast<ObjectId>(oa);
      const auto y = static_cast<ObjectId>(ob);
      const auto fib = j.fiber(x, y);
      const auto tgt = k.fiber(phi.left.obj(x), phi.right.obj(y));
      if (fib.size() != tgt.size()) return false;
      std::vector<ElemId> images;
      for (auto e : fib) images.push_back(phi.map[e]);
      std::sort(images.begin(), images.end());
      if (std::adjacent_find(images.begin(), images.end()) != images.end()) return false;
    }
  }
  return true;
}

namespace {

/// The comparison f^* (.) J (.) g_* => K of an arbitrary cell phi.
Cell opcartesian_comparison(const Cell& phi) {
  const auto gs = companion_unchecked(phi.right);
  const auto fs = conjoint_unchecked(phi.left);
  const auto inner = compose_prof(phi.source, gs.prof);
  const auto outer = compose_prof(fs.prof, inner.prof);
  const auto& k = *phi.target;
  Cell c{outer.prof, phi.target, identity_functor(k.source()), identity_functor(k.target()), {},
         {}};
  for (const auto& [x, z] : outer.reps) {
    const auto [j, y] = inner.reps[z];
    c.map.push_back(k.act(fs.arrows[x], phi.map[j], gs.arrows[y]));
  }
  return c;
}

}  // namespace

bool is_opcartesian(const Cell& phi) {
  return is_componentwise_bijective(opcartesian_comparison(phi));
}

// --- star factorisations -----------------------------------------------------

Cell lower_star(const Cell& phi) {
  const auto fs = companion_unchecked(phi.left);
  const auto gs = companion_unchecked(phi.right);
  const auto src = compose_prof(phi.source, gs.prof);
  const auto tgt = compose_prof(fs.prof, phi.target);
  const auto& j = *phi.source;
  const auto& k = *phi.target;
  const auto& c = *phi.left.target;
  Cell star{src.prof, tgt.prof, identity_functor(j.source()), identity_functor(k.target()), {},
            phi.name + "_*"};
  for (const auto& [x, y] : src.reps) {
    const auto a = j.element(x).a;
    star.map.push_back(
        tgt.cls(fs.element(a, c.identity(phi.left.obj(a))), k.right(gs.arrows[y], phi.map[x])));
  }
  // phi == l . (eps_f (.) id_K) . phi_* . (id_J (.) eta_g) . r^-1
  const auto chain =
      vcompose(vcompose(vcompose(vcompose(right_unitor_inv(phi.source),
                                          hcompose(identity_cell(phi.source), gs.eta)),
                                 star),
                        hcompose(fs.epsilon, identity_cell(phi.target))),
               left_unitor(phi.target));
  if (!(chain == phi)) {
    throw InternalInvariant("lower star of " + phi.name + " does not factorise it");
  }
  return star;
}

Cell upper_star(const Cell& phi) {
  const auto fs = conjoint_unchecked(phi.left);
  const auto gs = conjoint_unchecked(phi.right);
  const auto src = compose_prof(fs.prof, phi.source);
  const auto tgt = compose_prof(phi.target, gs.prof);
  const auto& j = *phi.source;
  const auto& k = *phi.target;
  const auto& d = *phi.right.target;
  Cell star{src.prof, tgt.prof, identity_functor(k.source()), identity_functor(j.target()), {},
            phi.name + "^*"};
  for (const auto& [x, y] : src.reps) {
    const auto b = j.element(y).b;
    star.map.push_back(
        tgt.cls(k.left(fs.arrows[x], phi.map[y]), gs.element(d.identity(phi.right.obj(b)), b)));
  }
  // phi == r . (id_K (.) eps_g) . phi^* . (eta_f (.) id_J) . l^-1
  const auto chain =
      vcompose(vcompose(vcompose(vcompose(left_unitor_inv(phi.source),
                                          hcompose(fs.eta, identity_cell(phi.source))),
                                 star),
                        hcompose(identity_cell(phi.target), gs.epsilon)),
               right_unitor(phi.target));
  if (!(chain == phi)) {
    throw InternalInvariant("upper star of " + phi.name + " does not factorise it");
  }
  return star;
}

// --- right hom ---------------------------------------------------------------

ElemId RightHom::find(ObjectId a, ObjectId b, const std::vector<ElemId>& family) const {
  auto it = lookup.find({a, b, family});
  return it == lookup.end() ? kNone : it->second;
}

RightHom rhom(const ProfPtr& kp, const ProfPtr& hp) {
  if (!same_category(kp->target(), hp->target())) {
    throw BoundaryMismatch("right hom " + kp->name() + " <| " + hp->name() +
                           " needs a common target");
  }
  const auto& k = *kp;
  const auto& h = *hp;
  const auto& a = *k.source();
  const auto& b = *h.source();
  const auto& e = *h.target();
  RightHom out;
  out.k = kp;
  out.h = hp;
  out.position.assign(h.num_elements(), 0);
  for (std::size_t ob = 0; ob < b.num_objects(); ++ob) {
    const auto from = h.from(static_cast<ObjectId>(ob));
    for (std::size_t i = 0; i < from.size(); ++i) out.position[from[i]] = i;
  }
  std::vector<Profunctor::Element> elements;
  for (std::size_t oa = 0; oa < a.num_objects(); ++oa) {
    for (std::size_t ob = 0; ob < b.num_objects(); ++ob) {
      const auto x = static_cast<ObjectId>(oa);
      const auto y = static_cast<ObjectId>(ob);
      const auto from = h.from(y);
      const auto n = from.size();
      std::vector<ElemId> value(n, kNone);
      std::vector<std::size_t> trail;
      auto assign = [&](std::size_t i, ElemId z) {
        std::vector<std::size_t> stack{i};
        value[i] = z;
        trail.push_back(i);
        while (!stack.empty()) {
          const auto p = stack.back();
          stack.pop_back();
          for (auto w : e.arrows_from(h.element(from[p]).b)) {
            const auto q = out.position[h.right(w, from[p])];
            const auto t = k.right(w, value[p]);
            if (value[q] == kNone) {
              value[q] = t;
              trail.push_back(q);
              stack.push_back(q);
            } else if (value[q] != t) {
              return false;
            }
          }
        }
        return true;
      };
      std::function<void(std::size_t)> rec = [&](std::size_t start) {
        std::size_t i = start;
        while (i < n && value[i] != kNone) ++i;
        if (i == n) {
          std::string name = "<" + a.object_name(x) + "," + b.object_name(y) + ":";
          for (std::size_t t = 0; t < n; ++t) {
            if (t) name += ",";
            name += k.element(value[t]).name;
          }
          name += ">";
          out.lookup[{x, y, value}] = static_cast<ElemId>(elements.size());
          out.families.push_back(value);
          elements.push_back({name, x, y});
          return;
        }
        for (auto z : k.fiber(x, h.element(from[i]).b)) {
          const auto mark = trail.size();
          if (assign(i, z)) rec(i + 1);
          while (trail.size() > mark) {
            value[trail.back()] = kNone;
            trail.pop_back();
          }
        }
      };
      rec(0);
    }
  }
  const auto& cr = out;
  out.prof = Profunctor::from_action(
      k.name() + "<|" + h.name(), k.source(), h.source(), std::move(elements),
      [&](ArrowId u, ElemId z, ArrowId v) {
        const auto y2 = b.target(v);
        const auto from = h.from(y2);
        std::vector<ElemId> family;
        family.reserve(from.size());
        for (auto hel : from) family.push_back(k.left(u, cr.apply(z, h.left(v, hel))));
        return cr.find(a.source(u), y2, family);
      });
  return out;
}

Cell transpose_flat(const Cell& theta, const Composite& jh, const RightHom& kh) {
  const auto& j = *jh.left;
  const auto& h = *jh.right;
  Cell c{jh.left, kh.prof, identity_functor(j.source()), identity_functor(j.target()), {},
         theta.name + "_flat"};
  for (std::size_t x = 0; x < j.num_elements(); ++x) {
    const auto& e = j.element(static_cast<ElemId>(x));
    std::vector<ElemId> family;
    for (auto hel : h.from(e.b)) family.push_back(theta.map[jh.cls(static_cast<ElemId>(x), hel)]);
    const auto z = kh.find(e.a, e.b, family);
    if (z == kNone) throw InternalInvariant("transpose of " + theta.name + " is not natural");
    c.map.push_back(z);
  }
  return c;
}

Cell transpose_sharp(const Cell& psi, const Composite& jh, const RightHom& kh) {
  Cell c{jh.prof, kh.k, identity_functor(jh.left->source()), identity_functor(kh.k->target()), {},
         psi.name + "_sharp"};
  for (const auto& [x, y] : jh.reps) c.map.push_back(kh.apply(psi.map[x], y));
  return c;
}

}  // namespace dcat
