#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/corpus.hpp"
#include "dcat/fincat.hpp"
#include "dcat/kan.hpp"
#include "oracles.hpp"

using namespace dcat;

namespace {

std::vector<CatPtr> corpus() {
  auto cs = small_categories(2, 4);
  for (const auto& c : {parallel_pair(), iso_category(), three_chain(), cospan_category(),
                        discrete_category(2), empty_category()}) {
    cs.push_back(c);
  }
  return cs;
}

ArrowId arrow(const CatPtr& c, const std::string& name) { return *c->find_arrow(name); }

}  // namespace

TEST_CASE("validate_category") {
  CHECK(validate_category(*one_category()).ok());
  CHECK(validate_category(*two_category()).ok());

  const auto two = two_category();
  auto table = two->table();
  const auto w = arrow(two, "w");
  const auto id0 = two->identity(0);
  table[static_cast<std::size_t>(w) * two->num_arrows() + id0] = two->identity(1);
  const FinCategory broken("Broken", two->objects(), two->arrows(), two->identities(), table);
  const auto rep = validate_category(broken);
  CHECK_FALSE(rep.ok());

  for (const auto& c : corpus()) CHECK(validate_category(*c).ok());
}

TEST_CASE("builder reports a missing composite") {
  CategoryBuilder b("Three");
  b.object("0").object("1").object("2").arrow("a", "0", "1").arrow("b", "1", "2").arrow("c", "0", "2");
  CHECK_THROWS_AS(b.build(), ValidationError);
  CHECK_NOTHROW(b.build_unchecked());
}

TEST_CASE("comma_category") {
  const auto one = one_category();
  const auto two = two_category();
  const auto pick0 = pick(one, two, 0);
  const auto pick1 = pick(one, two, 1);

  const auto c = comma_category(pick0, identity_functor(two));
  CHECK(c.category->num_objects() == 2);
  CHECK(c.category->num_arrows() == 3);
  CHECK(c.category->object_name(0) == "(*,1_0,0)");
  CHECK(c.category->object_name(1) == "(*,w,1)");
  CHECK(find_isomorphism(c.category, two).has_value());
  CHECK(validate_nat_transf(c.cell).ok());

  const auto ones = comma_category(identity_functor(one), identity_functor(one));
  CHECK(find_isomorphism(ones.category, one).has_value());

  const auto empty = comma_category(pick1, pick0);
  CHECK(empty.category->num_objects() == 0);
  CHECK(empty.category->num_arrows() == 0);
}

TEST_CASE("comma category sizes match a direct count") {
  const auto cs = small_categories(2, 3);
  for (const auto& a : cs) {
    for (const auto& e : cs) {
      for (const auto& f : all_functors(a, e)) {
        for (const auto& g : all_functors(a, e)) {
          const auto c = comma_category(f, g);
          std::size_t objects = 0;
          for (std::size_t x = 0; x < a->num_objects(); ++x) {
            for (std::size_t y = 0; y < a->num_objects(); ++y) {
              objects += e->hom(f.obj(static_cast<ObjectId>(x)), g.obj(static_cast<ObjectId>(y))).size();
            }
          }
          CHECK(c.category->num_objects() == objects);
          CHECK(validate_category(*c.category).ok());
          CHECK(validate_functor(c.proj_left).ok());
          CHECK(validate_functor(c.proj_right).ok());
        }
      }
    }
  }
}

TEST_CASE("limit") {
  const auto two = two_category();
  const Functor empty{empty_category(), two, {}, {}, "empty"};
  const auto l0 = limit(empty);
  REQUIRE(l0);
  CHECK(l0->apex == 1);

  const auto m = *limit(pick(one_category(), two, 1));
  CHECK(m.apex == 1);
  CHECK(m.legs == std::vector<ArrowId>{two->identity(1)});

  const auto id = *limit(identity_functor(two));
  CHECK(id.apex == 0);
  CHECK(id.legs == std::vector<ArrowId>{two->identity(0), arrow(two, "w")});

  // The parallel pair has no terminal object.
  const Functor none{empty_category(), parallel_pair(), {}, {}, "none"};
  CHECK_FALSE(limit(none).has_value());
}

TEST_CASE("limit agrees with a brute-force search over all cones") {
  const auto cs = small_categories(2, 3);
  std::vector<CatPtr> targets = cs;
  targets.push_back(parallel_pair());
  targets.push_back(three_chain());
  std::size_t compared = 0;
  for (const auto& i : cs) {
    for (const auto& m : targets) {
      for (const auto& d : all_functors(i, m)) {
        const auto got = limit(d);
        const auto want = oracle::naive_limit(d);
        REQUIRE(got.has_value() == want.has_value());
        if (got) {
          CHECK(*got == *want);
          CHECK(is_terminal_cone(d, *got));
          CHECK(limit(d) == got);
        }
        ++compared;
      }
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("is_connected") {
  CHECK(is_connected(*two_category()));
  CHECK_FALSE(is_connected(*empty_category()));
  CHECK_FALSE(is_connected(*discrete_category(2)));
  for (const auto& c : corpus()) {
    CHECK(connected_components(*c) == oracle::components(*c));
    CHECK(is_connected(*c) == (oracle::components(*c) == 1 && c->num_objects() > 0));
  }
}

TEST_CASE("all_functors") {
  const auto one = one_category();
  const auto two = two_category();
  CHECK(all_functors(one, two).size() == 2);
  CHECK(all_functors(two, one).size() == 1);
  CHECK(all_functors(two, two).size() == 3);
  const auto cs = corpus();
  for (const auto& a : cs) {
    for (const auto& m : cs) {
      const auto fs = all_functors(a, m);
      const auto want = oracle::functor_arrow_maps(*a, *m);
      CHECK(fs.size() == want.size());
      std::set<std::vector<ArrowId>> seen;
      for (const auto& f : fs) {
        CHECK(validate_functor(f).ok());
        seen.insert(f.on_arrows);
      }
      CHECK(seen.size() == fs.size());
      CHECK(seen == std::set<std::vector<ArrowId>>(want.begin(), want.end()));
    }
  }
}

TEST_CASE("slices reproduce initiality") {
  const auto one = one_category();
  const auto cs = small_categories(2, 3);
  for (const auto& b : cs) {
    for (const auto& d : cs) {
      for (const auto& g : all_functors(b, d)) {
        bool all = true;
        for (std::size_t x = 0; x < d->num_objects(); ++x) {
          all = all && is_connected(*comma_category(g, pick(one, d, static_cast<ObjectId>(x))).category);
        }
        CHECK(is_initial_functor(g).initial == all);
      }
    }
  }
}

TEST_CASE("natural transformations") {
  const auto two = two_category();
  const auto c0 = constant_functor(two, two, 0);
  const auto c1 = constant_functor(two, two, 1);
  const auto ts = all_nat_transfs(c0, c1);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].components == std::vector<ArrowId>{arrow(two, "w"), arrow(two, "w")});
  CHECK(all_nat_transfs(c1, c0).empty());
  CHECK(all_nat_transfs(identity_functor(two), identity_functor(two)).size() == 1);
}

TEST_CASE("inverse and isomorphism") {
  const auto iso = iso_category();
  CHECK(inverse(*iso, arrow(iso, "f")) == arrow(iso, "g"));
  CHECK_FALSE(inverse(*two_category(), arrow(two_category(), "w")).has_value());
  CHECK(find_isomorphism(iso, iso).has_value());
  CHECK_FALSE(find_isomorphism(two_category(), iso).has_value());
}
