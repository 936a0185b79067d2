// Serial reference against the OpenMP path of the enumeration kernels.

#include <benchmark/benchmark.h>

#include "dcat/corpus.hpp"
#include "dcat/kan.hpp"
#include "dcat/laws.hpp"
#include "dcat/parallel.hpp"
#include "dcat/spanfin.hpp"
#include "dcat/tab.hpp"

using namespace dcat;
using parallel::Execution;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

ProfPtr hom_two() { return hom_profunctor(two_category()); }

void BM_verify_tabulation(benchmark::State& state) {
  parallel::set_default_execution(mode(state));
  const auto t = tabulate(hom_two());
  const std::vector<CatPtr> probes{one_category(), two_category(), parallel_pair()};
  for (auto _ : state) benchmark::DoNotOptimize(verify_tabulation(t, probes));
}

void BM_verify_internal_tabulation(benchmark::State& state) {
  parallel::set_default_execution(mode(state));
  const auto t = span::internal_tabulate(span::unit_profunctor(span::from_fincat(two_category())));
  for (auto _ : state) benchmark::DoNotOptimize(span::verify_internal_tabulation(t));
}

void BM_right_exact(benchmark::State& state) {
  parallel::set_default_execution(mode(state));
  const auto two = two_category();
  const auto cell = comma_square_cell(identity_functor(two), pick(one_category(), two, 1));
  const auto probes = probe_categories(2);
  for (auto _ : state) benchmark::DoNotOptimize(is_right_exact(cell, ExactMode::pointwise, probes));
}

void BM_is_ran(benchmark::State& state) {
  parallel::set_default_execution(mode(state));
  const auto m = three_chain();
  const auto j = hom_profunctor(two_category());
  const auto d = all_functors(two_category(), m).back();
  const auto c = pointwise_ran(j, d);
  for (auto _ : state) benchmark::DoNotOptimize(analyse_ran(c));
}

void BM_compose(benchmark::State& state) {
  const auto c = three_chain();
  const auto j = hom_profunctor(c);
  for (auto _ : state) benchmark::DoNotOptimize(compose_prof(j, compose_prof(j, j).prof));
}

void BM_fuzz(benchmark::State& state) {
  parallel::set_default_execution(mode(state));
  laws::Config cfg;
  cfg.fuzz_cases = 2000;
  const auto corpus = laws::make_corpus(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(laws::run(12, corpus, cfg));
}

}  // namespace

BENCHMARK(BM_verify_tabulation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_internal_tabulation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_right_exact)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_is_ran)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_compose)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_fuzz)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
