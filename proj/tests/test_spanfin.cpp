#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dcat/corpus.hpp"
#include "dcat/spanfin.hpp"
#include "dcat/tab.hpp"
#include "oracles.hpp"

using namespace dcat;
using span::Map;

namespace {

Map map_of(std::size_t codomain, std::vector<std::size_t> values) {
  return Map{values.size(), codomain, std::move(values)};
}

std::vector<Map> all_maps(std::size_t n, std::size_t m) {
  std::vector<Map> out;
  if (n == 0) return {Map{0, m, {}}};
  if (m == 0) return out;
  std::vector<std::size_t> v(n, 0);
  while (true) {
    out.push_back(Map{n, m, v});
    std::size_t i = 0;
    while (i < n && ++v[i] == m) v[i++] = 0;
    if (i == n) break;
  }
  return out;
}

/// Same partition of the domain.
bool same_partition(const Map& x, const Map& y) {
  if (x.domain != y.domain) return false;
  for (std::size_t a = 0; a < x.domain; ++a) {
    for (std::size_t b = 0; b < x.domain; ++b) {
      if ((x(a) == x(b)) != (y(a) == y(b))) return false;
    }
  }
  return true;
}

/// Equivalence classes of the relation p r ~ q r by repeated relabelling.
Map closure_quotient(const Map& p, const Map& q) {
  std::vector<std::size_t> label(p.codomain);
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t r = 0; r < p.domain; ++r) {
      const auto m = std::min(label[p(r)], label[q(r)]);
      for (auto x : {p(r), q(r)}) {
        if (label[x] != m) {
          // Relabel the whole class.
          const auto old = label[x];
          for (auto& l : label) {
            if (l == old) l = m;
          }
          changed = true;
        }
      }
    }
  }
  return Map{p.codomain, p.codomain, label};
}

std::vector<CatPtr> small() {
  return {one_category(), two_category(), discrete_category(2), parallel_pair(), iso_category()};
}

}  // namespace

TEST_CASE("pullbacks") {
  const auto one = map_of(1, {0, 0, 0});
  const auto two = map_of(1, {0, 0});
  const auto pb = span::pullback(one, two);
  CHECK(pb.size() == 6);
  for (std::size_t n1 = 0; n1 <= 3; ++n1) {
    for (std::size_t n2 = 0; n2 <= 2; ++n2) {
      for (const auto& f : all_maps(n1, 2)) {
        for (const auto& g : all_maps(n2, 2)) {
          const auto p = span::pullback(f, g);
          std::vector<std::pair<std::size_t, std::size_t>> want;
          for (std::size_t x = 0; x < n1; ++x) {
            for (std::size_t y = 0; y < n2; ++y) {
              if (f(x) == g(y)) want.emplace_back(x, y);
            }
          }
          CHECK(p.pairs == want);
          CHECK(span::compose(f, p.p1) == span::compose(g, p.p2));
        }
      }
    }
  }
}

TEST_CASE("coequalizers") {
  const auto id = span::identity_map(3);
  const auto c = span::coequalizer(id, id);
  CHECK(c.quotient.codomain == 3);
  CHECK(c.quotient == span::identity_map(3));
  for (std::size_t r = 0; r <= 2; ++r) {
    for (const auto& p : all_maps(r, 4)) {
      for (const auto& q : all_maps(r, 4)) {
        const auto e = span::coequalizer(p, q);
        CHECK(same_partition(e.quotient, closure_quotient(p, q)));
        CHECK(span::compose(e.quotient, p) == span::compose(e.quotient, q));
        for (std::size_t k = 0; k < e.reps.size(); ++k) {
          CHECK(e.quotient(e.reps[k]) == k);
          for (std::size_t x = 0; x < e.reps[k]; ++x) CHECK(e.quotient(x) != k);
        }
      }
    }
  }
}

TEST_CASE("pullback preserves a coequalizer") {
  // The quotient {0,1,2} -> {[0,1],[2]} of 0 ~ 1.
  const auto p = map_of(3, {0});
  const auto q = map_of(3, {1});
  const auto c = span::coequalizer(p, q);
  REQUIRE(c.quotient.codomain == 2);
  const auto rel = span::compose(c.quotient, p);
  for (const auto& h : all_maps(2, 2)) {
    const auto pb = span::pullback(c.quotient, h);          // X x_Q Y
    const auto rb = span::pullback(rel, h);                 // R x_Q Y
    const auto pp = span::finset().induce(pb, span::compose(p, rb.p1), rb.p2);
    const auto qq = span::finset().induce(pb, span::compose(q, rb.p1), rb.p2);
    const auto e = span::coequalizer(pp, qq);
    CHECK(same_partition(e.quotient, pb.p2));
    std::set<std::size_t> image(pb.p2.values.begin(), pb.p2.values.end());
    CHECK(e.quotient.codomain == image.size());
  }
}

TEST_CASE("span composition") {
  const span::Span j{2, 2, 3, map_of(2, {0, 0, 1}), map_of(2, {0, 1, 1})};
  const span::Span h{2, 1, 2, map_of(2, {0, 1}), map_of(1, {0, 0})};
  const auto jh = span::span_compose(j, h);
  CHECK(jh.apex == 3);
  CHECK(jh.d0 == map_of(2, {0, 0, 1}));
  CHECK(jh.d1 == map_of(1, {0, 0, 0}));
}

TEST_CASE("bridge to finite categories") {
  const auto two = two_category();
  const auto it = span::from_fincat(two);
  CHECK(it->num_objects() == 2);
  CHECK(it->num_arrows() == 3);
  CHECK(span::validate_category(*it).ok());
  for (const auto& c : small()) {
    const auto ic = span::from_fincat(c);
    CHECK(span::validate_category(*ic).ok());
    CHECK(*span::to_fincat(*ic) == *c);
  }
  const auto bridged = span::from_prof(hom_profunctor(two), it, it);
  const auto unit = span::unit_profunctor(it);
  CHECK(bridged->span.apex == unit->span.apex);
  CHECK(bridged->span.d0 == unit->span.d0);
  CHECK(bridged->span.d1 == unit->span.d1);
  CHECK(bridged->l == unit->l);
  CHECK(bridged->r == unit->r);
  CHECK(*span::to_prof(*unit) == *hom_profunctor(two));
}

TEST_CASE("internal composition") {
  const auto two = two_category();
  const auto it = span::from_fincat(two);
  const auto unit = span::unit_profunctor(it);
  const auto uu = span::internal_prof_compose(unit, unit);
  CHECK(uu.prof->size() == 3);
  CHECK(oracle::isomorphic(*span::to_prof(*uu.prof), *hom_profunctor(two)));

  const auto empty = span::from_prof(empty_profunctor(two, two));
  CHECK(span::internal_prof_compose(empty, unit).prof->size() == 0);
  CHECK(span::internal_prof_compose(unit, empty).prof->size() == 0);

  for (const auto& a : small()) {
    for (const auto& b : small()) {
      for (const auto& p : sample(enumerate_profunctors(a, b, 2, 300), 4, 3)) {
        const auto j = span::from_prof(p);
        CHECK(span::validate_profunctor(*j).ok());
        CHECK(*span::to_prof(*j) == *p);
        const auto ub = span::unit_profunctor(j->target);
        const auto ju = span::internal_prof_compose(j, ub);
        CHECK(oracle::isomorphic(*span::to_prof(*ju.prof), *p));
        for (const auto& e : small()) {
          for (const auto& q : sample(enumerate_profunctors(b, e, 1, 100), 2, 5)) {
            const auto h = span::from_prof(q, j->target, span::from_fincat(e));
            CHECK(span::composition_coherent(j, h));
            const auto internal = span::to_prof(*span::internal_prof_compose(j, h).prof);
            CHECK(oracle::isomorphic(*internal, *compose_prof(p, q).prof));
          }
        }
      }
    }
  }
}

TEST_CASE("internal tabulation of the unit profunctor of Two") {
  const auto two = two_category();
  const auto unit = span::unit_profunctor(span::from_fincat(two));
  const auto t = span::internal_tabulate(unit);
  CHECK(t.total->num_objects() == 3);
  CHECK(t.total->num_arrows() == 6);
  const auto rep = span::verify_internal_tabulation(t);
  CHECK(rep.ok());
  CHECK(rep.checked_one > 0);
  CHECK(rep.checked_two > 0);
  CHECK(rep.checked_opcartesian > 0);
  CHECK(find_isomorphism(span::to_fincat(*t.total), tabulate(hom_profunctor(two)).total));
}

TEST_CASE("internal tabulation of an empty profunctor") {
  const auto two = two_category();
  const auto t = span::internal_tabulate(span::from_prof(empty_profunctor(two, two)));
  CHECK(t.total->num_objects() == 0);
  CHECK(t.total->num_arrows() == 0);
  CHECK(span::verify_internal_tabulation(t).ok());
}

TEST_CASE("a corrupted multiplication fails validation") {
  const auto two = two_category();
  auto t = span::internal_tabulate(span::unit_profunctor(span::from_fincat(two)));
  auto total = *t.total;
  // Send one composable pair to a different arrow with the same boundary
  // when there is one, otherwise to any arrow.
  REQUIRE(total.composable.size() > 0);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < total.composable.size(); ++k) {
    const auto [f, g] = total.composable.pairs[k];
    if (total.m(k) != f && total.m(k) != g) idx = k;
  }
  total.m.values[idx] = (total.m.values[idx] + 1) % total.num_arrows();
  CHECK_FALSE(span::validate_category(total).ok());
  t.total = std::make_shared<const span::InternalCategory>(total);
  const auto rep = span::verify_internal_tabulation(t);
  CHECK_FALSE(rep.valid);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("internal tabulation matches the tabulation of profunctors") {
  for (const auto& a : small()) {
    for (const auto& b : small()) {
      for (const auto& p : sample(enumerate_profunctors(a, b, 2, 300), 4, 9)) {
        const auto t = span::internal_tabulate(span::from_prof(p));
        CHECK(span::validate_category(*t.total).ok());
        CHECK(find_isomorphism(span::to_fincat(*t.total), tabulate(p).total).has_value());
      }
    }
  }
  for (const auto& a : {one_category(), two_category()}) {
    for (const auto& b : {one_category(), two_category()}) {
      for (const auto& p : sample(enumerate_profunctors(a, b, 1, 100), 3, 2)) {
        CHECK(span::verify_internal_tabulation(span::internal_tabulate(span::from_prof(p))).ok());
      }
    }
  }
}

TEST_CASE("an ill-formed profunctor is refused") {
  const auto two = two_category();
  auto unit = *span::unit_profunctor(span::from_fincat(two));
  // Corrupt one left action.
  unit.l.values[0] = (unit.l.values[0] + 1) % unit.size();
  CHECK_FALSE(span::validate_profunctor(unit).ok());
  CHECK_THROWS_AS(span::internal_tabulate(std::make_shared<const span::InternalProfunctor>(unit)),
                  span::ActionIncompatible);
}

TEST_CASE("vertical transformations and their components") {
  const auto two = two_category();
  const auto it = span::from_fincat(two);
  const auto unit = span::unit_profunctor(it);
  const auto id = span::identity_functor(it);
  const auto phi = span::transformation_of(it->e, id, id, unit);
  CHECK(phi.phi == span::identity_map(unit->size()));
  CHECK(span::components_of(phi) == it->e);

  std::size_t valid = 0;
  std::size_t refused = 0;
  for (const auto& c : {one_category(), two_category(), parallel_pair()}) {
    const auto ic = span::from_fincat(c);
    const auto k = span::unit_profunctor(ic);
    for (const auto& f : all_functors(two, c)) {
      for (const auto& g : all_functors(two, c)) {
        const auto fi = span::from_functor(f, it, ic);
        const auto gi = span::from_functor(g, it, ic);
        for (const auto& phi0 : all_maps(it->num_objects(), ic->num_arrows())) {
          try {
            const auto t = span::transformation_of(phi0, fi, gi, k);
            CHECK(span::validate_transformation(t).ok());
            CHECK(span::components_of(t) == phi0);
            CHECK(span::transformation_of(span::components_of(t), fi, gi, k).phi == t.phi);
            ++valid;
          } catch (const span::NaturalityFailure& e) {
            CHECK(std::string(e.what()).size() > 0);
            ++refused;
          }
        }
        CHECK(valid + refused > 0);
      }
    }
  }
  CHECK(valid > 0);
  CHECK(refused > 0);
}
