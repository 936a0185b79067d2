#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <stdexcept>

#include "dcat/corpus.hpp"
#include "dcat/kan.hpp"
#include "dcat/laws.hpp"
#include "dcat/parallel.hpp"
#include "dcat/spanfin.hpp"
#include "dcat/tab.hpp"

using namespace dcat;
using parallel::Execution;

namespace {

/// Runs f under both execution modes, with several threads in the parallel one.
template <class F>
auto both(F&& f) {
  omp_set_num_threads(4);
  parallel::set_default_execution(Execution::serial);
  auto s = f();
  parallel::set_default_execution(Execution::parallel);
  auto p = f();
  return std::make_pair(s, p);
}

std::vector<ProfPtr> profs() {
  std::vector<ProfPtr> out;
  for (const auto& a : {one_category(), two_category()}) {
    for (const auto& b : {two_category(), parallel_pair()}) {
      for (const auto& p : sample(enumerate_profunctors(a, b, 1, 100), 3, 1)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("map_indexed keeps index order and the first error") {
  for (auto ex : {Execution::serial, Execution::parallel}) {
    const auto v = parallel::map_indexed(100, [](std::size_t i) { return i * i; }, ex);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
    try {
      parallel::map_indexed(
          50,
          [](std::size_t i) -> int {
            if (i % 7 == 3) throw std::runtime_error(std::to_string(i));
            return 0;
          },
          ex);
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "3");
    }
  }
}

TEST_CASE("tabulation verification") {
  const std::vector<CatPtr> probes{one_category(), two_category()};
  for (const auto& p : profs()) {
    const auto [s, q] = both([&] { return verify_tabulation(tabulate(p), probes); });
    CHECK(s.ok() == q.ok());
    CHECK(s.cells_one == q.cells_one);
    CHECK(s.cells_two == q.cells_two);
    CHECK(s.witness == q.witness);
    const auto [is, iq] = both([&] {
      return span::verify_internal_tabulation(span::internal_tabulate(span::from_prof(p)));
    });
    CHECK(is.ok() == iq.ok());
    CHECK(is.checked_two == iq.checked_two);
    CHECK(is.checked_opcartesian == iq.checked_opcartesian);
  }
}

TEST_CASE("Kan extensions") {
  const auto m = three_chain();
  const auto homm = hom_profunctor(m);
  for (const auto& p : profs()) {
    for (const auto& d : all_functors(p->target(), m)) {
      for (const auto& r : sample(all_functors(p->source(), m), 2, 1)) {
        for (const auto& eps : sample(all_cells(p, homm, r, d), 2, 1)) {
          const RanCandidate c{p, d, r, eps};
          const auto [s, q] = both([&] { return analyse_ran(c); });
          CHECK(s.ordinary == q.ordinary);
          CHECK(s.pointwise_rhom == q.pointwise_rhom);
          CHECK(s.test_cells == q.test_cells);
          CHECK(s.failing_object == q.failing_object);
          CHECK(s.witness.has_value() == q.witness.has_value());
        }
      }
    }
  }
}

TEST_CASE("exactness") {
  const auto probes = probe_categories(1);
  const auto two = two_category();
  for (const auto& f : all_functors(two, two)) {
    for (const auto& k : all_functors(one_category(), two)) {
      const auto cell = comma_square_cell(f, k);
      const auto [s, q] = both([&] { return is_right_exact(cell, ExactMode::pointwise, probes); });
      CHECK(s.exact == q.exact);
      CHECK(s.extensions_checked == q.extensions_checked);
      CHECK(s.witness == q.witness);
    }
  }
}

TEST_CASE("law suite results") {
  laws::Config cfg;
  cfg.fuzz_cases = 2000;
  const auto corpus = laws::make_corpus(cfg);
  for (int id : {3, 4, 8, 11, 12}) {
    const auto [s, q] = both([&] { return laws::run(id, corpus, cfg); });
    CHECK(s.passed == q.passed);
    CHECK(s.checked == q.checked);
    CHECK(s.failures == q.failures);
    CHECK(s.witness == q.witness);
  }
}
