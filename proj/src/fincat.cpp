#include "dcat/fincat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "detail.hpp"

namespace dcat {

FinCategory::FinCategory(std::string name, std::vector<std::string> objects,
                         std::vector<Arrow> arrows, std::vector<ArrowId> identities,
                         std::vector<ArrowId> table)
    : name_(std::move(name)),
      objects_(std::move(objects)),
      arrows_(std::move(arrows)),
      identities_(std::move(identities)),
      table_(std::move(table)) {
  const auto n = objects_.size();
  const auto m = arrows_.size();
  if (identities_.size() != n || table_.size() != m * m) {
    throw ValidationError("category " + name_ + ": table dimensions do not match");
  }
  for (const auto& a : arrows_) {
    if (a.source < 0 || a.target < 0 || static_cast<std::size_t>(a.source) >= n ||
        static_cast<std::size_t>(a.target) >= n) {
      throw ValidationError("category " + name_ + ": arrow " + a.name + " has no valid endpoints");
    }
  }
  for (auto id : identities_) {
    if (id < 0 || static_cast<std::size_t>(id) >= m) {
      throw ValidationError("category " + name_ + ": identity index out of range");
    }
  }
  for (auto h : table_) {
    if (h != kNone && (h < 0 || static_cast<std::size_t>(h) >= m)) {
      throw ValidationError("category " + name_ + ": composite index out of range");
    }
  }
  homs_.assign(n * n, {});
  out_.assign(n, {});
  in_.assign(n, {});
  for (std::size_t f = 0; f < m; ++f) {
    const auto& a = arrows_[f];
    homs_[static_cast<std::size_t>(a.source) * n + a.target].push_back(static_cast<ArrowId>(f));
    out_[a.source].push_back(static_cast<ArrowId>(f));
    in_[a.target].push_back(static_cast<ArrowId>(f));
  }
}

std::optional<ObjectId> FinCategory::find_object(const std::string& name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) return std::nullopt;
  return static_cast<ObjectId>(it - objects_.begin());
}

std::optional<ArrowId> FinCategory::find_arrow(const std::string& name) const {
  auto it = std::find_if(arrows_.begin(), arrows_.end(),
                         [&](const Arrow& a) { return a.name == name; });
  if (it == arrows_.end()) return std::nullopt;
  return static_cast<ArrowId>(it - arrows_.begin());
}

bool operator==(const FinCategory& x, const FinCategory& y) {
  if (x.objects_ != y.objects_ || x.identities_ != y.identities_ || x.table_ != y.table_ ||
      x.arrows_.size() != y.arrows_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.arrows_.size(); ++i) {
    const auto& a = x.arrows_[i];
    const auto& b = y.arrows_[i];
    if (a.name != b.name || a.source != b.source || a.target != b.target) return false;
  }
  return true;
}

bool same_category(const CatPtr& x, const CatPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  return *x == *y;
}

// --- builder -------------------------------------------------------------

CategoryBuilder& CategoryBuilder::object(const std::string& name) {
  objects_.push_back(name);
  return *this;
}

CategoryBuilder& CategoryBuilder::arrow(const std::string& name, const std::string& source,
                                        const std::string& target) {
  auto find = [&](const std::string& o) -> ObjectId {
    auto it = std::find(objects_.begin(), objects_.end(), o);
    if (it == objects_.end()) {
      throw ValidationError("category " + name_ + ": unknown object " + o);
    }
    return static_cast<ObjectId>(it - objects_.begin());
  };
  arrows_.push_back({name, find(source), find(target)});
  return *this;
}

CategoryBuilder& CategoryBuilder::compose(const std::string& g, const std::string& f,
                                          const std::string& h) {
  composites_.push_back({g, f, h});
  return *this;
}

CatPtr CategoryBuilder::build() const { return assemble(true); }
CatPtr CategoryBuilder::build_unchecked() const { return assemble(false); }

CatPtr CategoryBuilder::assemble(bool check) const {
  const auto n = objects_.size();
  std::vector<FinCategory::Arrow> arrows;
  std::vector<ArrowId> identities;
  arrows.reserve(n + arrows_.size());
  for (std::size_t x = 0; x < n; ++x) {
    identities.push_back(static_cast<ArrowId>(arrows.size()));
    arrows.push_back({"1_" + objects_[x], static_cast<ObjectId>(x), static_cast<ObjectId>(x)});
  }
  for (const auto& a : arrows_) arrows.push_back(a);
  const auto m = arrows.size();
  auto find = [&](const std::string& a) -> ArrowId {
    for (std::size_t i = 0; i < m; ++i) {
      if (arrows[i].name == a) return static_cast<ArrowId>(i);
    }
    throw ValidationError("category " + name_ + ": unknown arrow " + a);
  };
  std::vector<ArrowId> table(m * m, kNone);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t f = 0; f < m; ++f) {
      if (arrows[f].target != arrows[g].source) continue;
      if (g < n) table[g * m + f] = static_cast<ArrowId>(f);
      else if (f < n) table[g * m + f] = static_cast<ArrowId>(g);
    }
  }
  for (const auto& e : composites_) {
    const auto g = find(e.g);
    const auto f = find(e.f);
    const auto h = find(e.h);
    if (check && arrows[f].target != arrows[g].source) {
      throw ValidationError("category " + name_ + ": compose " + e.g + " . " + e.f +
                            " is not composable");
    }
    table[static_cast<std::size_t>(g) * m + f] = h;
  }
  if (check) {
    for (std::size_t g = n; g < m; ++g) {
      for (std::size_t f = n; f < m; ++f) {
        if (arrows[f].target == arrows[g].source && table[g * m + f] == kNone) {
          throw ValidationError("category " + name_ + ": composition not total: missing " +
                                arrows[g].name + " . " + arrows[f].name);
        }
      }
    }
  }
  auto c = std::make_shared<const FinCategory>(name_, objects_, std::move(arrows),
                                               std::move(identities), std::move(table));
  if (check) {
    auto report = validate_category(*c);
    if (!report.ok()) throw ValidationError("category " + name_ + ": " + report.violations.front());
  }
  return c;
}

// --- validation ------------------------------------------------------------

ValidationReport validate_category(const FinCategory& c) {
  ValidationReport r;
  const auto m = c.num_arrows();
  const auto name = [&](ArrowId f) { return c.arrow(f).name; };
  for (std::size_t x = 0; x < c.num_objects(); ++x) {
    const auto id = c.identity(static_cast<ObjectId>(x));
    if (c.source(id) != static_cast<ObjectId>(x) || c.target(id) != static_cast<ObjectId>(x)) {
      r.violations.push_back("identity " + name(id) + " is not an endomorphism of " +
                             c.object_name(static_cast<ObjectId>(x)));
    }
  }
  for (std::size_t gi = 0; gi < m; ++gi) {
    for (std::size_t fi = 0; fi < m; ++fi) {
      const auto g = static_cast<ArrowId>(gi);
      const auto f = static_cast<ArrowId>(fi);
      const auto h = c.compose(g, f);
      const bool composable = c.target(f) == c.source(g);
      if (!composable) {
        if (h != kNone) {
          r.violations.push_back("ill-typed composite " + name(g) + " . " + name(f) +
                                 " defined on a non-composable pair");
        }
        continue;
      }
      if (h == kNone) {
        r.violations.push_back("composition not total: missing " + name(g) + " . " + name(f));
        continue;
      }
      if (c.source(h) != c.source(f) || c.target(h) != c.target(g)) {
        r.violations.push_back("ill-typed composite " + name(g) + " . " + name(f) + " = " +
                               name(h));
      }
    }
  }
  if (!r.ok()) return r;
  for (std::size_t fi = 0; fi < m; ++fi) {
    const auto f = static_cast<ArrowId>(fi);
    if (c.compose(f, c.identity(c.source(f))) != f) {
      r.violations.push_back("unit law fails: " + name(f) + " . 1 != " + name(f));
    }
    if (c.compose(c.identity(c.target(f)), f) != f) {
      r.violations.push_back("unit law fails: 1 . " + name(f) + " != " + name(f));
    }
  }
  for (std::size_t fi = 0; fi < m; ++fi) {
    const auto f = static_cast<ArrowId>(fi);
    for (auto g : c.arrows_from(c.target(f))) {
      const auto gf = c.compose(g, f);
      for (auto h : c.arrows_from(c.target(g))) {
        if (c.compose(h, gf) != c.compose(c.compose(h, g), f)) {
          r.violations.push_back("associativity fails on (" + name(h) + ", " + name(g) + ", " +
                                 name(f) + ")");
        }
      }
    }
  }
  return r;
}

// --- functors ------------------------------------------------------------

bool operator==(const Functor& f, const Functor& g) {
  return same_category(f.source, g.source) && same_category(f.target, g.target) &&
         f.on_objects == g.on_objects && f.on_arrows == g.on_arrows;
}

ValidationReport validate_functor(const Functor& f) {
  ValidationReport r;
  const auto& a = *f.source;
  const auto& b = *f.target;
  if (f.on_objects.size() != a.num_objects() || f.on_arrows.size() != a.num_arrows()) {
    r.violations.push_back("functor " + f.name + ": map sizes do not match its source");
    return r;
  }
  for (auto y : f.on_objects) {
    if (y < 0 || static_cast<std::size_t>(y) >= b.num_objects()) {
      r.violations.push_back("functor " + f.name + ": object image out of range");
      return r;
    }
  }
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const auto u = static_cast<ArrowId>(i);
    const auto v = f.on_arrows[i];
    if (v < 0 || static_cast<std::size_t>(v) >= b.num_arrows()) {
      r.violations.push_back("functor " + f.name + ": arrow image of " + a.arrow(u).name +
                             " out of range");
      return r;
    }
    if (b.source(v) != f.obj(a.source(u)) || b.target(v) != f.obj(a.target(u))) {
      r.violations.push_back("functor " + f.name + ": " + a.arrow(u).name +
                             " is not sent between the images of its endpoints");
    }
  }
  if (!r.ok()) return r;
  for (std::size_t x = 0; x < a.num_objects(); ++x) {
    const auto ox = static_cast<ObjectId>(x);
    if (f.arr(a.identity(ox)) != b.identity(f.obj(ox))) {
      r.violations.push_back("functor " + f.name + ": identity of " + a.object_name(ox) +
                             " not preserved");
    }
  }
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const auto u = static_cast<ArrowId>(i);
    for (auto v : a.arrows_from(a.target(u))) {
      if (f.arr(a.compose(v, u)) != b.compose(f.arr(v), f.arr(u))) {
        r.violations.push_back("functor " + f.name + ": composite " + a.arrow(v).name + " . " +
                               a.arrow(u).name + " not preserved");
      }
    }
  }
  return r;
}

Functor identity_functor(const CatPtr& c) {
  Functor f{c, c, {}, {}, "1_" + c->name()};
  f.on_objects.resize(c->num_objects());
  f.on_arrows.resize(c->num_arrows());
  std::iota(f.on_objects.begin(), f.on_objects.end(), 0);
  std::iota(f.on_arrows.begin(), f.on_arrows.end(), 0);
  return f;
}

Functor compose(const Functor& g, const Functor& f) {
  if (!same_category(f.target, g.source)) {
    throw BoundaryMismatch("cannot compose functors " + g.name + " . " + f.name);
  }
  Functor h{f.source, g.target, {}, {}, {}};
  if (!g.name.empty() || !f.name.empty()) h.name = g.name + "." + f.name;
  h.on_objects.reserve(f.on_objects.size());
  for (auto x : f.on_objects) h.on_objects.push_back(g.obj(x));
  h.on_arrows.reserve(f.on_arrows.size());
  for (auto u : f.on_arrows) h.on_arrows.push_back(g.arr(u));
  return h;
}

Functor constant_functor(const CatPtr& source, const CatPtr& target, ObjectId value) {
  Functor f{source, target, std::vector<ObjectId>(source->num_objects(), value),
            std::vector<ArrowId>(source->num_arrows(), target->identity(value)),
            "const_" + target->object_name(value)};
  return f;
}

Functor pick(const CatPtr& one, const CatPtr& c, ObjectId x) {
  if (one->num_objects() != 1 || one->num_arrows() != 1) {
    throw BoundaryMismatch("pick needs a terminal source category");
  }
  Functor f{one, c, {x}, {c->identity(x)}, "pick_" + c->object_name(x)};
  return f;
}

Functor to_terminal(const CatPtr& c, const CatPtr& one) {
  if (one->num_objects() != 1 || one->num_arrows() != 1) {
    throw BoundaryMismatch("to_terminal needs a terminal target category");
  }
  return Functor{c, one, std::vector<ObjectId>(c->num_objects(), 0),
                 std::vector<ArrowId>(c->num_arrows(), 0), "!_" + c->name()};
}

// --- natural transformations ---------------------------------------------

bool operator==(const NatTransf& x, const NatTransf& y) {
  return x.source == y.source && x.target == y.target && x.components == y.components;
}

ValidationReport validate_nat_transf(const NatTransf& t) {
  ValidationReport r;
  const auto& a = *t.source.source;
  const auto& b = *t.source.target;
  if (!same_category(t.source.source, t.target.source) ||
      !same_category(t.source.target, t.target.target)) {
    r.violations.push_back("natural transformation between functors with different boundaries");
    return r;
  }
  if (t.components.size() != a.num_objects()) {
    r.violations.push_back("natural transformation has the wrong number of components");
    return r;
  }
  for (std::size_t x = 0; x < a.num_objects(); ++x) {
    const auto c = t.components[x];
    const auto ox = static_cast<ObjectId>(x);
    if (c < 0 || static_cast<std::size_t>(c) >= b.num_arrows() ||
        b.source(c) != t.source.obj(ox) || b.target(c) != t.target.obj(ox)) {
      r.violations.push_back("component at " + a.object_name(ox) + " is ill-typed");
    }
  }
  if (!r.ok()) return r;
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const auto u = static_cast<ArrowId>(i);
    const auto lhs = b.compose(t.target.arr(u), t.components[a.source(u)]);
    const auto rhs = b.compose(t.components[a.target(u)], t.source.arr(u));
    if (lhs != rhs) {
      r.violations.push_back("naturality fails at " + a.arrow(u).name);
    }
  }
  return r;
}

std::vector<NatTransf> all_nat_transfs(const Functor& f, const Functor& g) {
  if (!same_category(f.source, g.source) || !same_category(f.target, g.target)) {
    throw BoundaryMismatch("natural transformations need parallel functors");
  }
  const auto& a = *f.source;
  const auto& b = *f.target;
  const auto n = a.num_objects();
  // Naturality squares checked as soon as both endpoints have components.
  std::vector<std::vector<ArrowId>> checks(n);
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const auto u = static_cast<ArrowId>(i);
    checks[std::max(a.source(u), a.target(u))].push_back(u);
  }
  std::vector<NatTransf> out;
  std::vector<ArrowId> comp(n, kNone);
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == n) {
      out.push_back(NatTransf{f, g, comp});
      return;
    }
    const auto ox = static_cast<ObjectId>(x);
    for (auto c : b.hom(f.obj(ox), g.obj(ox))) {
      comp[x] = c;
      bool ok = true;
      for (auto u : checks[x]) {
        if (b.compose(g.arr(u), comp[a.source(u)]) != b.compose(comp[a.target(u)], f.arr(u))) {
          ok = false;
          break;
        }
      }
      if (ok) rec(x + 1);
    }
    comp[x] = kNone;
  };
  rec(0);
  return out;
}

// --- comma categories ---------------------------------------------------

Comma comma_category(const Functor& f, const Functor& g) {
  if (!same_category(f.target, g.target)) {
    throw BoundaryMismatch("comma category needs functors with a common target");
  }
  const auto& c = *f.source;
  const auto& d = *g.source;
  const auto& e = *f.target;
  struct Obj {
    ObjectId c, d;
    ArrowId u;
  };
  std::vector<Obj> objs;
  for (std::size_t x = 0; x < c.num_objects(); ++x) {
    for (std::size_t y = 0; y < d.num_objects(); ++y) {
      for (auto u : e.hom(f.obj(static_cast<ObjectId>(x)), g.obj(static_cast<ObjectId>(y)))) {
        objs.push_back({static_cast<ObjectId>(x), static_cast<ObjectId>(y), u});
      }
    }
  }
  std::vector<std::string> names;
  for (const auto& o : objs) {
    names.push_back("(" + c.object_name(o.c) + "," + e.arrow(o.u).name + "," +
                    d.object_name(o.d) + ")");
  }
  struct Mor {
    ObjectId s, t;
    ArrowId p, q;
  };
  std::vector<Mor> mors;
  std::vector<ArrowId> identities(objs.size(), kNone);
  std::map<std::tuple<ObjectId, ObjectId, ArrowId, ArrowId>, ArrowId> index;
  for (std::size_t s = 0; s < objs.size(); ++s) {
    for (std::size_t t = 0; t < objs.size(); ++t) {
      const auto& x = objs[s];
      const auto& y = objs[t];
      for (auto p : c.hom(x.c, y.c)) {
        for (auto q : d.hom(x.d, y.d)) {
          if (e.compose(g.arr(q), x.u) != e.compose(y.u, f.arr(p))) continue;
          const auto id = static_cast<ArrowId>(mors.size());
          if (s == t && c.is_identity(p) && d.is_identity(q)) {
            identities[s] = id;
          }
          index[{static_cast<ObjectId>(s), static_cast<ObjectId>(t), p, q}] = id;
          mors.push_back({static_cast<ObjectId>(s), static_cast<ObjectId>(t), p, q});
        }
      }
    }
  }
  std::vector<FinCategory::Arrow> arrows;
  std::vector<std::string> arrow_names;
  for (std::size_t i = 0; i < mors.size(); ++i) {
    const auto& m = mors[i];
    if (identities[m.s] == static_cast<ArrowId>(i)) {
      arrow_names.push_back("1_" + names[m.s]);
    } else {
      arrow_names.push_back("(" + c.arrow(m.p).name + "," + d.arrow(m.q).name + ")");
    }
  }
  detail::make_unique_names(arrow_names);
  for (std::size_t i = 0; i < mors.size(); ++i) {
    arrows.push_back({arrow_names[i], mors[i].s, mors[i].t});
  }
  const auto nm = mors.size();
  std::vector<ArrowId> table(nm * nm, kNone);
  for (std::size_t gi = 0; gi < nm; ++gi) {
    for (std::size_t fi = 0; fi < nm; ++fi) {
      const auto& a1 = mors[fi];
      const auto& a2 = mors[gi];
      if (a1.t != a2.s) continue;
      table[gi * nm + fi] = index.at({a1.s, a2.t, c.compose(a2.p, a1.p), d.compose(a2.q, a1.q)});
    }
  }
  auto cat = std::make_shared<const FinCategory>(f.name + "/" + g.name, names, std::move(arrows),
                                                 std::move(identities), std::move(table));
  Functor pl{cat, f.source, {}, {}, "pi_" + c.name()};
  Functor pr{cat, g.source, {}, {}, "pi_" + d.name()};
  for (const auto& o : objs) {
    pl.on_objects.push_back(o.c);
    pr.on_objects.push_back(o.d);
  }
  for (const auto& m : mors) {
    pl.on_arrows.push_back(m.p);
    pr.on_arrows.push_back(m.q);
  }
  NatTransf cell{compose(f, pl), compose(g, pr), {}};
  for (const auto& o : objs) cell.components.push_back(o.u);
  return Comma{cat, pl, pr, cell};
}

// --- limits --------------------------------------------------------------

bool is_cone(const Functor& diagram, const Cone& cone) {
  const auto& i = *diagram.source;
  const auto& m = *diagram.target;
  if (cone.legs.size() != i.num_objects()) return false;
  for (std::size_t x = 0; x < i.num_objects(); ++x) {
    const auto leg = cone.legs[x];
    if (m.source(leg) != cone.apex || m.target(leg) != diagram.obj(static_cast<ObjectId>(x))) {
      return false;
    }
  }
  for (std::size_t k = 0; k < i.num_arrows(); ++k) {
    const auto v = static_cast<ArrowId>(k);
    if (m.compose(diagram.arr(v), cone.legs[i.source(v)]) != cone.legs[i.target(v)]) return false;
  }
  return true;
}

std::vector<Cone> cones_with_apex(const Functor& diagram, ObjectId apex) {
  const auto& i = *diagram.source;
  const auto& m = *diagram.target;
  const auto n = i.num_objects();
  std::vector<std::vector<ArrowId>> checks(n);
  for (std::size_t k = 0; k < i.num_arrows(); ++k) {
    const auto v = static_cast<ArrowId>(k);
    checks[std::max(i.source(v), i.target(v))].push_back(v);
  }
  std::vector<Cone> out;
  Cone cur{apex, std::vector<ArrowId>(n, kNone)};
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == n) {
      out.push_back(cur);
      return;
    }
    for (auto leg : m.hom(apex, diagram.obj(static_cast<ObjectId>(x)))) {
      cur.legs[x] = leg;
      bool ok = true;
      for (auto v : checks[x]) {
        if (m.compose(diagram.arr(v), cur.legs[i.source(v)]) != cur.legs[i.target(v)]) {
          ok = false;
          break;
        }
      }
      if (ok) rec(x + 1);
    }
    cur.legs[x] = kNone;
  };
  rec(0);
  return out;
}

std::vector<ArrowId> mediating_arrows(const Functor& diagram, const Cone& limit, const Cone& cone) {
  const auto& m = *diagram.target;
  std::vector<ArrowId> out;
  for (auto h : m.hom(cone.apex, limit.apex)) {
    bool ok = true;
    for (std::size_t x = 0; x < limit.legs.size(); ++x) {
      if (m.compose(limit.legs[x], h) != cone.legs[x]) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(h);
  }
  return out;
}

namespace {

bool terminal_among(const Functor& diagram, const Cone& cone,
                    const std::vector<std::vector<Cone>>& by_apex) {
  for (const auto& cones : by_apex) {
    for (const auto& other : cones) {
      if (mediating_arrows(diagram, cone, other).size() != 1) return false;
    }
  }
  return true;
}

std::vector<std::vector<Cone>> all_cones(const Functor& diagram) {
  std::vector<std::vector<Cone>> by_apex;
  for (std::size_t x = 0; x < diagram.target->num_objects(); ++x) {
    by_apex.push_back(cones_with_apex(diagram, static_cast<ObjectId>(x)));
  }
  return by_apex;
}

}  // namespace

bool is_terminal_cone(const Functor& diagram, const Cone& cone) {
  if (!is_cone(diagram, cone)) return false;
  return terminal_among(diagram, cone, all_cones(diagram));
}

std::optional<Cone> limit(const Functor& diagram) {
  const auto by_apex = all_cones(diagram);
  for (const auto& cones : by_apex) {
    for (const auto& cone : cones) {
      if (terminal_among(diagram, cone, by_apex)) return cone;
    }
  }
  return std::nullopt;
}

std::optional<ArrowId> inverse(const FinCategory& c, ArrowId f) {
  for (auto g : c.hom(c.target(f), c.source(f))) {
    if (c.compose(g, f) == c.identity(c.source(f)) && c.compose(f, g) == c.identity(c.target(f))) {
      return g;
    }
  }
  return std::nullopt;
}

// --- connectivity --------------------------------------------------------

std::size_t connected_components(const FinCategory& c) {
  detail::UnionFind uf(c.num_objects());
  for (const auto& a : c.arrows()) uf.unite(a.source, a.target);
  return uf.count();
}

bool is_connected(const FinCategory& c) {
  return c.num_objects() > 0 && connected_components(c) == 1;
}

// --- functor search -------------------------------------------------------

namespace {

/// Backtracking search over functors a -> m. With `iso` set, only
/// bijections on objects and on every hom-set are produced.
void search_functors(const CatPtr& a, const CatPtr& m, bool iso,
                     const std::function<bool(const Functor&)>& visit) {
  const auto& ca = *a;
  const auto& cm = *m;
  const auto n = ca.num_objects();
  if (iso && (n != cm.num_objects() || ca.num_arrows() != cm.num_arrows())) return;
  // Non-identity arrows in order; composite constraints are attached to the
  // latest position among the arrows involved.
  std::vector<ArrowId> order;
  std::vector<int> position(ca.num_arrows(), -1);
  for (std::size_t i = 0; i < ca.num_arrows(); ++i) {
    if (!ca.is_identity(static_cast<ArrowId>(i))) {
      position[i] = static_cast<int>(order.size());
      order.push_back(static_cast<ArrowId>(i));
    }
  }
  struct Constraint {
    ArrowId g, f, h;
  };
  std::vector<std::vector<Constraint>> constraints(order.size());
  for (auto f : order) {
    for (auto g : ca.arrows_from(ca.target(f))) {
      if (ca.is_identity(g)) continue;
      const auto h = ca.compose(g, f);
      const int p = std::max({position[f], position[g], position[h]});
      constraints[p].push_back({g, f, h});
    }
  }
  Functor cur{a, m, std::vector<ObjectId>(n, kNone), std::vector<ArrowId>(ca.num_arrows(), kNone),
              {}};
  std::vector<char> used_obj(cm.num_objects(), 0);
  std::vector<char> used_arr(cm.num_arrows(), 0);
  bool stop = false;

  std::function<void(std::size_t)> arrows_rec = [&](std::size_t k) {
    if (stop) return;
    if (k == order.size()) {
      if (!visit(cur)) stop = true;
      return;
    }
    const auto f = order[k];
    for (auto g : cm.hom(cur.obj(ca.source(f)), cur.obj(ca.target(f)))) {
      if (iso && (used_arr[g] || cm.is_identity(g))) continue;
      cur.on_arrows[f] = g;
      bool ok = true;
      for (const auto& c : constraints[k]) {
        if (cur.arr(c.h) != cm.compose(cur.arr(c.g), cur.arr(c.f))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        if (iso) used_arr[g] = 1;
        arrows_rec(k + 1);
        if (iso) used_arr[g] = 0;
      }
      if (stop) return;
    }
    cur.on_arrows[f] = kNone;
  };

  std::function<void(std::size_t)> objects_rec = [&](std::size_t x) {
    if (stop) return;
    if (x == n) {
      for (std::size_t y = 0; y < n; ++y) {
        cur.on_arrows[ca.identity(static_cast<ObjectId>(y))] = cm.identity(cur.on_objects[y]);
      }
      arrows_rec(0);
      return;
    }
    for (std::size_t y = 0; y < cm.num_objects(); ++y) {
      if (iso) {
        if (used_obj[y]) continue;
        bool ok = true;
        for (std::size_t z = 0; z <= x && ok; ++z) {
          const auto fz = z == x ? static_cast<ObjectId>(y) : cur.on_objects[z];
          ok = ca.hom(static_cast<ObjectId>(z), static_cast<ObjectId>(x)).size() ==
                   cm.hom(fz, static_cast<ObjectId>(y)).size() &&
               ca.hom(static_cast<ObjectId>(x), static_cast<ObjectId>(z)).size() ==
                   cm.hom(static_cast<ObjectId>(y), fz).size();
        }
        if (!ok) continue;
        used_obj[y] = 1;
      }
      cur.on_objects[x] = static_cast<ObjectId>(y);
      objects_rec(x + 1);
      if (iso) used_obj[y] = 0;
      if (stop) return;
    }
    cur.on_objects[x] = kNone;
  };
  objects_rec(0);
}

}  // namespace

std::vector<Functor> all_functors(const CatPtr& a, const CatPtr& m) {
  std::vector<Functor> out;
  search_functors(a, m, false, [&](const Functor& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

std::optional<Functor> find_isomorphism(const CatPtr& x, const CatPtr& y) {
  std::optional<Functor> found;
  search_functors(x, y, true, [&](const Functor& f) {
    found = f;
    return false;
  });
  return found;
}

bool is_isomorphism(const Functor& f) {
  const auto& a = *f.source;
  const auto& b = *f.target;
  if (a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows()) return false;
  if (!validate_functor(f).ok()) return false;
  std::vector<char> seen(b.num_arrows(), 0);
  for (auto v : f.on_arrows) {
    if (seen[v]) return false;
    seen[v] = 1;
  }
  std::vector<char> seen_obj(b.num_objects(), 0);
  for (auto y : f.on_objects) {
    if (seen_obj[y]) return false;
    seen_obj[y] = 1;
  }
  return true;
}

}  // namespace dcat
