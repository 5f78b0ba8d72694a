#include "crem/counterexample.hpp"
#include "crem/interval_sets.hpp"
#include "crem/koch_bounds.hpp"
#include "crem/plane_sets.hpp"
#include "crem/sampling.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace crem;

void BM_CantorValue(benchmark::State& state) {
  const Halton h(1);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cantor_value(h(i++, 0), static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_CantorValue)->Arg(20)->Arg(40);

void BM_PointIsClear(benchmark::State& state) {
  const auto s = holey_staircase();
  const Halton h(2);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const Point2 p{h(i, 0), h(i, 1)};
    ++i;
    benchmark::DoNotOptimize(s->point_is_clear(p, static_cast<unsigned>(state.range(0)), 1e-12));
  }
}
BENCHMARK(BM_PointIsClear)->Arg(10)->Arg(30);

void BM_SegmentClearance(benchmark::State& state) {
  const auto s = holey_staircase();
  const Halton h(3);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const Segment2 seg{{h(i, 0) - 0.5, h(i, 1)}, {h(i, 2) + 0.5, h(i, 3)}};
    ++i;
    benchmark::DoNotOptimize(s->segment_clearance(seg, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_SegmentClearance)->Arg(6)->Arg(10);

void BM_EvalF(benchmark::State& state) {
  const auto p = build_params(fat_cantor(Rational(1, 12), static_cast<unsigned>(state.range(0))).gaps,
                              BetaPolicy::Uniform);
  const Halton h(4);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const Point2 x{4 * h(i, 0) - 2, 4 * h(i, 1) - 2};
    ++i;
    benchmark::DoNotOptimize(eval_f(p, x));
  }
}
BENCHMARK(BM_EvalF)->Arg(5)->Arg(8);

void BM_Certify(benchmark::State& state) {
  const auto p = build_params(fat_cantor(Rational(1, 12), 5).gaps, BetaPolicy::Uniform);
  const Halton h(5);
  std::uint64_t i = 0;
  for (auto _ : state) {
    Point2 x{4 * h(i, 0) - 2, 4 * h(i, 1) - 2};
    ++i;
    if (in_obstacle(p, x)) x.x = 1.5;
    benchmark::DoNotOptimize(certify_local_convexity(p, x));
  }
}
BENCHMARK(BM_Certify);

void BM_KochLowerBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(koch_lower_bound(static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_KochLowerBound)->Arg(10)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
