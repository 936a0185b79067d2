#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/corpus.hpp"
#include "dcat/kan.hpp"
#include "dcat/laws.hpp"
#include "oracles.hpp"

using namespace dcat;

namespace {

std::vector<CatPtr> sources() { return {one_category(), two_category(), discrete_category(2)}; }
std::vector<CatPtr> targets() {
  return {one_category(), two_category(), parallel_pair(), iso_category(), three_chain(),
          cospan_category()};
}

std::vector<ProfPtr> profs(const CatPtr& a, const CatPtr& b, std::size_t n = 4) {
  return sample(enumerate_profunctors(a, b, 1, 200), n, a->num_arrows() * 17 + b->num_arrows());
}

/// Pointwise in Prof: every r(a) with the legs of the counit is the
/// J(a, -)-weighted limit of d.
bool pointwise_oracle(const RanCandidate& c) {
  const auto& j = *c.along;
  for (std::size_t a = 0; a < j.source()->num_objects(); ++a) {
    const auto aa = static_cast<ObjectId>(a);
    std::vector<ArrowId> legs;
    for (auto x : j.from(aa)) legs.push_back(c.counit.map[x]);
    if (!oracle::is_weighted_limit(j, aa, c.of, c.extension.obj(aa), legs)) return false;
  }
  return true;
}

struct Job {
  ProfPtr j;
  Functor d;
};

std::vector<Job> jobs() {
  std::vector<Job> out;
  for (const auto& a : sources()) {
    for (const auto& b : sources()) {
      for (const auto& m : targets()) {
        for (const auto& j : profs(a, b)) {
          for (const auto& d : sample(all_functors(b, m), 3, m->num_arrows())) out.push_back({j, d});
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pointwise_ran along a conjoint") {
  const auto one = one_category();
  const auto two = two_category();
  const auto p0 = pick(one, two, 0);
  const auto c = pointwise_ran(conjoint(p0).prof, p0);
  CHECK(c.extension.obj(0) == 0);
  CHECK(c.extension.obj(1) == 1);
  CHECK(c.extension.arr(*two->find_arrow("w")) == *two->find_arrow("w"));
  CHECK(validate_candidate(c).ok());
  CHECK(is_ran(c));
  CHECK(is_pointwise_ran(c));
}

TEST_CASE("pointwise_ran along the unit profunctor") {
  for (const auto& a : sources()) {
    for (const auto& m : targets()) {
      for (const auto& d : all_functors(a, m)) {
        const auto c = pointwise_ran(hom_profunctor(a), d);
        for (std::size_t x = 0; x < a->num_objects(); ++x) {
          const auto xx = static_cast<ObjectId>(x);
          // r(x) is isomorphic to d(x).
          const auto& mm = *m;
          bool iso = c.extension.obj(xx) == d.obj(xx);
          for (auto u : mm.hom(c.extension.obj(xx), d.obj(xx))) iso = iso || inverse(mm, u);
          CHECK(iso);
        }
        const RanCandidate unit{hom_profunctor(a), d, d, unit_cell(d)};
        CHECK(is_ran(unit));
        CHECK(is_pointwise_ran(unit));
      }
    }
  }
}

TEST_CASE("pointwise_ran computes weighted limits") {
  std::size_t computed = 0;
  std::size_t missing = 0;
  for (const auto& [j, d] : jobs()) {
    try {
      const auto c = pointwise_ran(j, d);
      CHECK(validate_candidate(c).ok());
      CHECK(pointwise_oracle(c));
      CHECK(is_ran(c));
      CHECK(is_pointwise_ran(c));
      ++computed;
    } catch (const NoLimit& e) {
      // No object of M carries the weighted limit at e.object.
      const auto& mm = *d.target;
      const auto from = j->from(e.object);
      bool any = false;
      for (std::size_t apex = 0; apex < mm.num_objects() && !any; ++apex) {
        std::vector<std::vector<ArrowId>> choices;
        for (auto x : from) {
          const auto h = mm.hom(static_cast<ObjectId>(apex), d.obj(j->element(x).b));
          choices.emplace_back(h.begin(), h.end());
        }
        std::vector<ArrowId> legs;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (any) return;
          if (i == choices.size()) {
            any = oracle::is_weighted_limit(*j, e.object, d, static_cast<ObjectId>(apex), legs);
            return;
          }
          for (auto u : choices[i]) {
            legs.push_back(u);
            rec(i + 1);
            legs.pop_back();
          }
        };
        rec(0);
      }
      CHECK_FALSE(any);
      ++missing;
    }
  }
  CHECK(computed > 50);
  CHECK(missing > 0);
}

TEST_CASE("NoLimit names the object") {
  const auto one = one_category();
  const auto par = parallel_pair();
  // The empty weight asks for a terminal object.
  const auto empty = empty_profunctor(one, one);
  CHECK_THROWS_AS(pointwise_ran(empty, constant_functor(one, par, 0)), NoLimit);
  try {
    pointwise_ran(empty, constant_functor(one, par, 0));
  } catch (const NoLimit& e) {
    CHECK(e.object == 0);
  }
}

TEST_CASE("pointwise procedures against the weighted-limit oracle on all candidates") {
  std::size_t checked = 0;
  for (const auto& [j, d] : jobs()) {
    const auto& a = j->source();
    const auto homm = hom_profunctor(d.target);
    for (const auto& r : sample(all_functors(a, d.target), 4, 7)) {
      for (const auto& eps : sample(all_cells(j, homm, r, d), 4, 11)) {
        const RanCandidate c{j, d, r, eps};
        const auto rep = analyse_ran(c);
        CHECK(rep.pointwise_rhom == rep.pointwise_limits);
        CHECK(rep.pointwise_rhom == pointwise_oracle(c));
        if (rep.pointwise_rhom) CHECK(rep.ordinary);
        if (!rep.ordinary) CHECK(rep.witness.has_value());
        ++checked;
      }
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("a perturbed extension is rejected with a witness") {
  const auto one = one_category();
  const auto two = two_category();
  const auto p0 = pick(one, two, 0);
  const auto j = conjoint(p0).prof;
  const auto good = pointwise_ran(j, p0);
  const auto homm = hom_profunctor(two);
  std::size_t rejected = 0;
  for (const auto& r : all_functors(two, two)) {
    if (r == good.extension) continue;
    for (const auto& eps : all_cells(j, homm, r, p0)) {
      KanReport rep;
      CHECK_FALSE(is_ran({j, p0, r, eps}, &rep));
      REQUIRE(rep.witness.has_value());
      CHECK(rep.witness->factorizations != 1);
      ++rejected;
    }
  }
  CHECK(rejected > 0);
}

TEST_CASE("an ordinary extension that is not pointwise") {
  const auto ex = laws::non_pointwise_example();
  const RanCandidate c{ex.j, ex.d, ex.r, ex.counit};
  CHECK(validate_candidate(c).ok());
  const auto rep = analyse_ran(c);
  CHECK(rep.ordinary);
  CHECK_FALSE(rep.pointwise_rhom);
  CHECK_FALSE(rep.pointwise_limits);
  REQUIRE(rep.failing_object.has_value());
  CHECK(*rep.failing_object == 0);
  CHECK_FALSE(pointwise_oracle(c));

  const auto probes = check_pointwise_probes(c, object_probes(ex.j->source()));
  CHECK_FALSE(probes.candidate_pointwise);
  bool some_fail = false;
  for (const auto& p : probes.probes) some_fail = some_fail || !p.pointwise;
  CHECK(some_fail);
}

TEST_CASE("probes") {
  for (const auto& [j, d] : jobs()) {
    try {
      const auto c = pointwise_ran(j, d);
      const auto rep = check_pointwise_probes(c, object_probes(j->source()));
      CHECK(rep.candidate_pointwise);
      for (const auto& p : rep.probes) {
        CHECK(p.pointwise);
        CHECK(p.ordinary);
      }
      const auto id = check_pointwise_probes(c, {identity_functor(j->source())});
      CHECK(id.probes.front().pointwise == rep.candidate_pointwise);
    } catch (const NoLimit&) {
    }
  }
}

TEST_CASE("restricting a candidate") {
  for (const auto& [j, d] : jobs()) {
    try {
      const auto c = pointwise_ran(j, d);
      for (const auto& f : all_functors(one_category(), j->source())) {
        const auto r = restrict_candidate(c, f);
        CHECK(validate_candidate(r).ok());
        CHECK(is_pointwise_ran(r));
      }
    } catch (const NoLimit&) {
    }
  }
}

TEST_CASE("exactness") {
  const auto one = one_category();
  const auto probes = probe_categories(1);
  for (const auto& a : sources()) {
    for (const auto& b : sources()) {
      for (const auto& j : profs(a, b, 3)) {
        const auto id = identity_cell(j);
        CHECK(beck_chevalley(id));
        CHECK(is_right_exact(id, ExactMode::ordinary, probes).exact);
        CHECK(is_right_exact(id, ExactMode::pointwise, probes).exact);
      }
    }
  }
  for (const auto& a : sources()) {
    for (const auto& c : sources()) {
      for (const auto& d : sources()) {
        for (const auto& f : all_functors(a, c)) {
          for (const auto& k : all_functors(d, c)) {
            const auto cell = comma_square_cell(f, k);
            CHECK(beck_chevalley(cell));
            CHECK(is_right_exact(cell, ExactMode::pointwise, probes).exact);
          }
        }
      }
    }
  }
  const Cell empty{empty_profunctor(one, one), hom_profunctor(one), identity_functor(one),
                   identity_functor(one), {}, "empty"};
  CHECK_FALSE(beck_chevalley(empty));
  const auto rep = is_right_exact(empty, ExactMode::pointwise, probe_categories(2));
  CHECK_FALSE(rep.exact);
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("initial functors") {
  const auto one = one_category();
  const auto two = two_category();
  const auto p0 = is_initial_functor(pick(one, two, 0));
  CHECK(p0.initial);
  CHECK(p0.opcartesian);
  const auto p1 = is_initial_functor(pick(one, two, 1));
  CHECK_FALSE(p1.initial);
  CHECK_FALSE(p1.opcartesian);
  CHECK(p1.witness == "g/0 empty");
  for (const auto& c : targets()) CHECK(is_initial_functor(identity_functor(c)).initial);

  for (const auto& b : sources()) {
    for (const auto& dd : targets()) {
      for (const auto& g : all_functors(b, dd)) {
        const auto rep = is_initial_functor(g);
        CHECK(rep.initial == rep.opcartesian);
        CHECK(rep.initial == rep.star_invertible);
        if (!rep.initial) continue;
        for (const auto& m : targets()) {
          for (const auto& d : sample(all_functors(dd, m), 5, 3)) {
            const auto lt = limit_along(g, d);
            CHECK(lt.ok());
            CHECK(lt.limit_d == limit(d).has_value());
            CHECK(lt.limit_dg == limit(compose(d, g)).has_value());
          }
        }
      }
    }
  }
}

TEST_CASE("pasting") {
  std::size_t checked = 0;
  for (const auto& [h, d] : jobs()) {
    RanCandidate eps;
    try {
      eps = pointwise_ran(h, d);
    } catch (const NoLimit&) {
      continue;
    }
    const auto& a = h->source();
    const auto m = d.target;
    const auto homm = hom_profunctor(m);
    for (const auto& s0 : sources()) {
      for (const auto& j : profs(s0, a, 2)) {
        try {
          const auto gamma = pointwise_ran(j, eps.extension);
          const auto rep = pasting_check(gamma, eps);
          CHECK(rep.ok());
          CHECK(rep.gamma_ordinary);
          CHECK(rep.composite_pointwise);
          ++checked;
        } catch (const NoLimit&) {
        }
        for (const auto& s : sample(all_functors(s0, m), 2, 5)) {
          for (const auto& g : sample(all_cells(j, homm, s, eps.extension), 2, 9)) {
            const RanCandidate gamma{j, eps.extension, s, g};
            const auto rep = pasting_check(gamma, eps);
            CHECK(rep.ok());
            CHECK(rep.gamma_ordinary == is_ran(gamma));
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("precomposition") {
  for (const auto& a : sources()) {
    for (const auto& c : sources()) {
      for (const auto& m : targets()) {
        for (const auto& f : all_functors(a, c)) {
          for (const auto& r : sample(all_functors(c, m), 3, 13)) {
            const auto cand = precomposition_candidate(f, r);
            CHECK(validate_candidate(cand).ok());
            CHECK(cand.extension == compose(r, f));
            CHECK(is_pointwise_ran(cand));
            CHECK(pointwise_oracle(cand));
          }
        }
      }
    }
  }
}
