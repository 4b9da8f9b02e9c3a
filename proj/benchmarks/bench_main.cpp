#include <benchmark/benchmark.h>

#include <random>

#include "gidx/chern_weil.hpp"
#include "gidx/cohomology.hpp"
#include "gidx/elliptic_family.hpp"
#include "gidx/forms.hpp"
#include "gidx/index_theorem.hpp"
#include "gidx/integer_matrix.hpp"
#include "gidx/parallel.hpp"
#include "gidx/presets.hpp"

using namespace gidx;

namespace {

void BM_SmithNormalForm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> entry(-50, 50);
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CohomologySuspendedRP2(benchmark::State& state) {
  const SimplicialComplex x = complexes::suspended_projective_plane();
  for (auto _ : state) benchmark::DoNotOptimize(cohomology_group(x, 3));
}
BENCHMARK(BM_CohomologySuspendedRP2)->Unit(benchmark::kMillisecond);

void BM_MonopoleChernIntegral(benchmark::State& state) {
  set_thread_count(1);
  const AtlasPtr atlas = Atlas::sphere_two_patch(static_cast<int>(state.range(0)));
  const ConnectionData conn = monopole_connection(atlas, 1, false);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(chern_character_form(curvature(conn))));
}
BENCHMARK(BM_MonopoleChernIntegral)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BottToeplitzAnalyticIndex(benchmark::State& state) {
  set_thread_count(1);
  const FamilySpec f = families::bott_toeplitz(Atlas::sphere_two_patch(static_cast<int>(state.range(0))), 8);
  for (auto _ : state) benchmark::DoNotOptimize(index_chern_integrals(analytic_index(f, stabilize(f))));
}
BENCHMARK(BM_BottToeplitzAnalyticIndex)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BottToeplitzTopologicalIndex(benchmark::State& state) {
  set_thread_count(1);
  const FamilySpec f = families::bott_toeplitz(Atlas::sphere_two_patch(static_cast<int>(state.range(0))), 8);
  for (auto _ : state) benchmark::DoNotOptimize(form_integrals(topological_index_chern(symbol_class(f))));
}
BENCHMARK(BM_BottToeplitzTopologicalIndex)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ThomRiemannRoch(benchmark::State& state) {
  set_thread_count(1);
  for (auto _ : state) benchmark::DoNotOptimize(thom_rr_check(ThomFixture{1, 0, 12, 12, 1.0}));
}
BENCHMARK(BM_ThomRiemannRoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
