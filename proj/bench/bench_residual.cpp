#include "hns/analysis.hpp"
#include "hns/families.hpp"
#include "hns/liouville.hpp"

#include <benchmark/benchmark.h>

using namespace hns;

namespace {

FieldSource catalog_source() { return source_of(SolutionSpec(family::NoSwirlOneSing{0.5, 0.2})); }

FieldSource liouville_source() {
  SingularityPrescription p;
  p.points = {spherical_to_cartesian({1, 1.0, 0.3}), spherical_to_cartesian({1, 2.0, 2.0}),
              spherical_to_cartesian({1, 0.4, 4.0})};
  p.exponents = {2, 2, -3};
  const auto s = LiouvilleSolution::build(p);
  return {s.as_field(), s.domain()};
}

GridSpec grid(benchmark::State &state) {
  GridSpec g;
  g.n_theta = static_cast<int>(state.range(0));
  g.n_phi = 2 * g.n_theta;
  g.radii = {0.5, 1.0, 2.0};
  return g;
}

void residual(benchmark::State &state, FieldSource (*make)(), bool parallel) {
  const FieldSource src = make();
  const GridSpec g = grid(state);
  for (auto _ : state) {
    const ResidualReport r = parallel ? residual_parallel(src, g, true) : residual_serial(src, g, true);
    benchmark::DoNotOptimize(r.max_momentum);
  }
  state.SetItemsProcessed(state.iterations() * g.n_theta * g.n_phi * static_cast<long>(g.radii.size()));
}

} // namespace

BENCHMARK_CAPTURE(residual, catalog_serial, catalog_source, false)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(residual, catalog_parallel, catalog_source, true)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(residual, liouville_serial, liouville_source, false)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(residual, liouville_parallel, liouville_source, true)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
