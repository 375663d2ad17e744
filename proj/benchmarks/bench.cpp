#include <benchmark/benchmark.h>

#include "ifstile/attractor.hpp"
#include "ifstile/geometry.hpp"
#include "ifstile/neighbors.hpp"
#include "ifstile/tiling.hpp"

using namespace ifstile;

namespace {

IfsSpec sierpinski() {
  return IfsSpec::make(
      {Similitude::make(2, {0.5, 0.0, 0.0, 0.5}, {0.0, 0.0}),
       Similitude::make(2, {0.5, 0.0, 0.0, 0.5}, {0.5, 0.0}),
       Similitude::make(2, {0.5, 0.0, 0.0, 0.5},
                        {0.25, 0.43301270189221932})},
      {1.0, 1.0, 1.0}, "sierpinski");
}

void bm_chaos_game(benchmark::State& state) {
  const IfsSpec spec = sierpinski();
  for (auto _ : state) {
    PointCloud c = chaos_game(spec, static_cast<std::size_t>(state.range(0)),
                              100, 0x5eed);
    benchmark::DoNotOptimize(c.coords.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_chaos_game)->Arg(10000)->Arg(100000);

void bm_distance_field(benchmark::State& state) {
  const IfsSpec spec = sierpinski();
  const PointCloud cloud = chaos_game(spec, 50000, 100, 0x5eed);
  const Box window = bounding_box(cloud).inflated(0.1);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RasterField f = distance_field(cloud, window, n, n);
    benchmark::DoNotOptimize(f.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(bm_distance_field)->Arg(128)->Arg(256);

void bm_cut_set(benchmark::State& state) {
  const CostFunction cf{{1.0, 2.0}};
  const double budget = static_cast<double>(state.range(0));
  for (auto _ : state) {
    CutSet cut = cut_set(cf, budget);
    benchmark::DoNotOptimize(cut.words.data());
  }
}
BENCHMARK(bm_cut_set)->Arg(8)->Arg(16)->Arg(24);

void bm_enumerate_neighbors(benchmark::State& state) {
  const IfsSpec spec = sierpinski();
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    NeighborSet n = enumerate_neighbors(spec, depth);
    benchmark::DoNotOptimize(n.maps.data());
  }
}
BENCHMARK(bm_enumerate_neighbors)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
