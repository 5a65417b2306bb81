#include <benchmark/benchmark.h>

#include "restrict4/adapt.hpp"
#include "restrict4/newton.hpp"
#include "restrict4/oscint.hpp"
#include "restrict4/restrict.hpp"

using namespace restrict4;

namespace {

void BM_NewtonDistance(benchmark::State& state) {
  const SupportSet s = support(parse_polynomial(
      "x1^8 + x2^7*x3 + x1^3*x2^3*x3^2 + x3^6 + x1^2*x2^5 + x1*x3^5 + x2^2*x3^4 + x1^5*x3^2"));
  for (auto _ : state) benchmark::DoNotOptimize(newton_distance(s));
}
BENCHMARK(BM_NewtonDistance);

void BM_DistanceOracle(benchmark::State& state) {
  const SupportSet s = support(parse_polynomial(
      "x1^8 + x2^7*x3 + x1^3*x2^3*x3^2 + x3^6 + x1^2*x2^5 + x1*x3^5 + x2^2*x3^4 + x1^5*x3^2"));
  for (auto _ : state) benchmark::DoNotOptimize(distance_oracle(s));
}
BENCHMARK(BM_DistanceOracle);

void BM_ComposeLinear(benchmark::State& state) {
  const Polynomial p = parse_polynomial("x1^2 + x2^2 + x3^4 + x1*x2*x3^2 + x2^3*x3");
  const LinearChange r = LinearChange::plane_rotation(0, 2, 0.4) * LinearChange::plane_rotation(1, 2, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(compose_linear(p, r, 1e-10));
}
BENCHMARK(BM_ComposeLinear);

void BM_HeightSearch(benchmark::State& state) {
  const Polynomial p = parse_polynomial("x1^2+x2^2+x3^4");
  HeightSearchOptions o;
  o.starts = 8;
  o.iters = 20;
  o.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(height_search(p, o));
}
BENCHMARK(BM_HeightSearch)->Unit(benchmark::kMillisecond);

void BM_SurfaceTransform(benchmark::State& state) {
  const SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^4"));
  const double lam = static_cast<double>(state.range(0));
  const FrequencyPoint xi{{0.0, 0.0, 0.0, lam}};
  const PanelLayout layout = base_panels(sp, xi, 8.0);
  std::uint64_t evals = 0;
  for (auto _ : state) {
    const SurfaceTransform t = integrate_at(sp, xi, layout, 1);
    evals += t.evaluations;
    benchmark::DoNotOptimize(t.value);
  }
  state.counters["evals/s"] = benchmark::Counter(static_cast<double>(evals), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SurfaceTransform)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_KnappLhs(benchmark::State& state) {
  const Polynomial p = parse_polynomial("x1^2+x2^2+x3^4");
  const KnappFamily fam = knapp_family(p, distance(build_polyhedron(support(p))), default_knapp_scales());
  const SurfacePatch sp(p);
  KnappOptions o;
  o.threads = 1;
  const double delta = fam.scales[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(knapp_lhs(sp, fam, delta, o));
}
BENCHMARK(BM_KnappLhs)->Arg(0)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_KnappRhs(benchmark::State& state) {
  const Polynomial p = parse_polynomial("x1^2+x2^2+x3^2");
  const KnappFamily fam = knapp_family(p, distance(build_polyhedron(support(p))), default_knapp_scales());
  for (auto _ : state) benchmark::DoNotOptimize(knapp_rhs(fam, fam.scales.back(), 10.0 / 7.0));
}
BENCHMARK(BM_KnappRhs)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
