#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/corpus.hpp"
#include "dcat/laws.hpp"
#include "dcat/tab.hpp"
#include "oracles.hpp"

using namespace dcat;

namespace {

std::vector<CatPtr> small() { return {one_category(), two_category(), discrete_category(2)}; }

std::vector<ProfPtr> profs(const CatPtr& a, const CatPtr& b, std::size_t n = 6) {
  return sample(enumerate_profunctors(a, b, 2, 400), n, a->num_arrows() * 7 + b->num_arrows());
}

/// Morphisms (u, v): (a, j, b) -> (a', j', b') with j' . u == v . j, counted
/// over all arrow pairs.
std::size_t count_squares(const Profunctor& j) {
  const auto& a = *j.source();
  const auto& b = *j.target();
  std::size_t n = 0;
  for (std::size_t x = 0; x < j.num_elements(); ++x) {
    for (std::size_t y = 0; y < j.num_elements(); ++y) {
      const auto& ex = j.element(static_cast<ElemId>(x));
      const auto& ey = j.element(static_cast<ElemId>(y));
      for (auto u : a.hom(ex.a, ey.a)) {
        for (auto v : b.hom(ex.b, ey.b)) {
          if (j.left(u, static_cast<ElemId>(y)) == j.right(v, static_cast<ElemId>(x))) ++n;
        }
      }
    }
  }
  return n;
}

/// The same tabulation with one morphism of the total category removed.
/// The morphism must not be a composite of two others.
Tabulation delete_arrow(const Tabulation& t, ArrowId k) {
  const auto& c = *t.total;
  std::vector<ArrowId> to_new(c.num_arrows(), kNone);
  std::vector<FinCategory::Arrow> arrows;
  for (std::size_t f = 0; f < c.num_arrows(); ++f) {
    if (static_cast<ArrowId>(f) == k) continue;
    to_new[f] = static_cast<ArrowId>(arrows.size());
    arrows.push_back(c.arrow(static_cast<ArrowId>(f)));
  }
  const auto n = arrows.size();
  std::vector<ArrowId> table(n * n, kNone);
  for (std::size_t g = 0; g < c.num_arrows(); ++g) {
    for (std::size_t f = 0; f < c.num_arrows(); ++f) {
      if (to_new[g] == kNone || to_new[f] == kNone) continue;
      const auto gf = c.compose(static_cast<ArrowId>(g), static_cast<ArrowId>(f));
      if (gf == kNone) continue;
      REQUIRE(gf != k);
      table[static_cast<std::size_t>(to_new[g]) * n + to_new[f]] = to_new[gf];
    }
  }
  std::vector<ArrowId> ids;
  for (auto i : c.identities()) ids.push_back(to_new[i]);
  auto total = std::make_shared<const FinCategory>(c.name(), c.objects(), arrows, ids, table);
  REQUIRE(validate_category(*total).ok());

  Tabulation out = t;
  out.total = total;
  auto restrict_functor = [&](const Functor& f) {
    Functor g{total, f.target, f.on_objects, {}, f.name};
    for (std::size_t a = 0; a < c.num_arrows(); ++a) {
      if (to_new[a] != kNone) g.on_arrows.push_back(f.on_arrows[a]);
    }
    return g;
  };
  out.proj_a = restrict_functor(t.proj_a);
  out.proj_b = restrict_functor(t.proj_b);
  out.pi = Cell{hom_profunctor(total), t.of, out.proj_a, out.proj_b, {}, t.pi.name};
  out.arrow_pair.clear();
  for (std::size_t a = 0; a < c.num_arrows(); ++a) {
    if (to_new[a] == kNone) continue;
    out.pi.map.push_back(t.pi.map[a]);
    out.arrow_pair.push_back(t.arrow_pair[a]);
  }
  return out;
}

}  // namespace

TEST_CASE("tabulate examples") {
  const auto two = two_category();
  const auto t = tabulate(hom_profunctor(two));
  CHECK(t.total->num_objects() == 3);
  CHECK(t.total->num_arrows() == 6);
  CHECK(validate_cell(t.pi).ok());
  CHECK(is_opcartesian_tabulation(t));
  CHECK(t.total->object_name(0) == "(0,1_0,0)");

  const auto e = tabulate(empty_profunctor(two, two));
  CHECK(e.total->num_objects() == 0);
  CHECK(e.total->num_arrows() == 0);

  const auto one = one_category();
  const auto o = tabulate(hom_profunctor(one));
  CHECK(find_isomorphism(o.total, one).has_value());
}

TEST_CASE("tabulations agree with a direct count of squares") {
  for (const auto& a : small()) {
    for (const auto& b : small()) {
      for (const auto& j : profs(a, b)) {
        const auto t = tabulate(j);
        CHECK(t.total->num_objects() == j->num_elements());
        CHECK(t.total->num_arrows() == count_squares(*j));
        CHECK(validate_category(*t.total).ok());
        CHECK(validate_functor(t.proj_a).ok());
        CHECK(validate_functor(t.proj_b).ok());
        CHECK(validate_cell(t.pi).ok());
        CHECK(is_opcartesian_tabulation(t));
      }
    }
  }
}

TEST_CASE("verify_tabulation") {
  const auto one = one_category();
  const auto two = two_category();
  const auto t = tabulate(hom_profunctor(two));
  const auto rep = verify_tabulation(t, {one, two});
  CHECK(rep.ok());
  CHECK(rep.cells_one > 0);
  CHECK(rep.cells_two > 0);
  CHECK_FALSE(rep.coverage.empty());

  const auto e = verify_tabulation(tabulate(empty_profunctor(two, two)), {one, two});
  CHECK(e.ok());
  CHECK(e.cells_one == 0);

  for (const auto& a : small()) {
    for (const auto& b : small()) {
      for (const auto& j : profs(a, b, 3)) CHECK(verify_tabulation(tabulate(j), {one, two}).ok());
    }
  }
}

TEST_CASE("a deleted morphism breaks the one-dimensional property") {
  const auto two = two_category();
  const auto t = tabulate(hom_profunctor(two));
  // The square (1_0, w): (0,1_0,0) -> (0,w,1).
  std::optional<ArrowId> k;
  for (std::size_t f = 0; f < t.total->num_arrows(); ++f) {
    const auto ff = static_cast<ArrowId>(f);
    if (t.total->object_name(t.total->source(ff)) == "(0,1_0,0)" &&
        t.total->object_name(t.total->target(ff)) == "(0,w,1)") {
      k = ff;
    }
  }
  REQUIRE(k);
  const auto broken = delete_arrow(t, *k);
  CHECK(broken.total->num_arrows() == 5);
  const auto rep = verify_tabulation(broken, {one_category(), two});
  CHECK_FALSE(rep.one_dimensional);
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("a redirected projection is not opcartesian") {
  const auto two = two_category();
  auto t = tabulate(hom_profunctor(two));
  t.proj_b = constant_functor(t.total, two, 1);
  t.pi.right = t.proj_b;
  t.pi.map.clear();
  // Send every morphism to w or 1_1, the only elements into 1.
  for (std::size_t f = 0; f < t.total->num_arrows(); ++f) {
    const auto x = t.total->source(static_cast<ArrowId>(f));
    t.pi.map.push_back(t.proj_a.obj(x) == 0 ? *two->find_arrow("w") : two->identity(1));
  }
  CHECK(validate_cell(t.pi).ok());
  CHECK_FALSE(is_opcartesian_tabulation(t));
}

TEST_CASE("comma objects") {
  const auto one = one_category();
  const auto two = two_category();
  const auto c = comma_object(pick(one, two, 0), identity_functor(two));
  CHECK(c.tabulation.total->num_objects() == 2);
  CHECK(find_isomorphism(c.tabulation.total,
                         comma_category(pick(one, two, 0), identity_functor(two)).category));
  const auto ones = comma_object(identity_functor(one), identity_functor(one));
  CHECK(find_isomorphism(ones.tabulation.total, one));
  const auto empty = comma_object(pick(one, two, 1), pick(one, two, 0));
  CHECK(empty.tabulation.total->num_objects() == 0);

  for (const auto& a : small()) {
    for (const auto& b : small()) {
      for (const auto& m : {two_category(), parallel_pair(), cospan_category()}) {
        for (const auto& f : all_functors(a, m)) {
          for (const auto& g : all_functors(b, m)) {
            const auto co = comma_object(f, g);
            const auto direct = comma_category(f, g);
            CHECK(find_isomorphism(co.tabulation.total, direct.category).has_value());
            CHECK(is_isomorphism(co.comparison));
            CHECK(validate_cell(co.cell).ok());
          }
        }
      }
    }
  }
}

TEST_CASE("Kan extensions through tabulations") {
  const auto one = one_category();
  const auto two = two_category();
  const auto p0 = pick(one, two, 0);
  const auto c = pointwise_ran(conjoint(p0).prof, p0);
  const auto rep = ran_via_tabulation(c, &p0);
  CHECK(rep.pointwise);
  CHECK(rep.street);
  CHECK(rep.tab_prime_opcartesian);
  REQUIRE(rep.conjoint_street.has_value());
  CHECK(*rep.conjoint_street);
  CHECK(rep.agree());

  const auto ex = laws::non_pointwise_example();
  const auto np = ran_via_tabulation({ex.j, ex.d, ex.r, ex.counit});
  CHECK_FALSE(np.pointwise);
  CHECK_FALSE(np.street);
  CHECK(np.agree());

  for (const auto& a : small()) {
    for (const auto& m : {two_category(), parallel_pair(), iso_category()}) {
      for (const auto& d : all_functors(a, m)) {
        const RanCandidate unit{hom_profunctor(a), d, d, unit_cell(d)};
        const auto u = ran_via_tabulation(unit);
        CHECK(u.pointwise);
        CHECK(u.street);
        CHECK(u.agree());
      }
    }
  }

  for (const auto& a : small()) {
    for (const auto& b : small()) {
      for (const auto& m : {two_category(), three_chain()}) {
        for (const auto& j : profs(a, b, 3)) {
          for (const auto& d : all_functors(b, m)) {
            const auto homm = hom_profunctor(m);
            for (const auto& r : sample(all_functors(a, m), 3, 5)) {
              for (const auto& eps : sample(all_cells(j, homm, r, d), 2, 3)) {
                const auto v = ran_via_tabulation({j, d, r, eps});
                CHECK(v.agree());
                CHECK(v.pointwise == is_pointwise_ran({j, d, r, eps}));
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("Street test in Cat") {
  const auto one = one_category();
  const auto two = two_category();
  // The right Kan extension of pick0 along the identity is itself.
  const auto id = identity_functor(two);
  const NatTransf sigma{id, id, {two->identity(0), two->identity(1)}};
  CHECK(is_ran_in_cat(id, id, id, sigma));
  const auto rep = street_pointwise(id, id, id, sigma, StreetProbes::general, {one, two});
  CHECK(rep.pointwise);
  CHECK(rep.probes_checked > 0);
}
