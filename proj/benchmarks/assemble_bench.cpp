#include <benchmark/benchmark.h>

#include "wgscat/geometry.hpp"
#include "wgscat/i2i.hpp"
#include "wgscat/solver.hpp"

using namespace wgscat;

namespace {

geometry::ComponentGeometry channel(double len) {
  geometry::LoopInput loop;
  loop.vertices = {{0.0, 0.0}, {len, 0.0}, {len, 2.0}, {0.0, 2.0}};
  loop.port_edges = {1, 3};
  return geometry::build_component({loop}, modal::BcKind::Dirichlet, 2.0);
}

geometry::Discretization panels(const geometry::ComponentGeometry& comp,
                                int grading) {
  geometry::PanelizeOptions opt;
  opt.h = 0.5;
  opt.grading_levels = grading;
  return geometry::panelize(comp, opt);
}

}  // namespace

static void BM_Panelize(benchmark::State& state) {
  auto comp = channel(4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(panels(comp, int(state.range(0))));
  }
}
BENCHMARK(BM_Panelize)->Arg(8)->Arg(16)->Arg(30);

static void BM_AssembleSystem(benchmark::State& state) {
  auto comp = channel(4.0);
  auto disc = panels(comp, int(state.range(0)));
  geometry::build_image_panels(comp, disc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solver::assemble_system(comp, disc, {-0.2, 0.0}));
  }
  state.SetLabel(std::to_string(16 * disc.panels.size()) + " pts");
}
BENCHMARK(BM_AssembleSystem)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ImpedanceMap(benchmark::State& state) {
  auto comp = channel(4.0);
  auto disc = panels(comp, 8);
  geometry::build_image_panels(comp, disc);
  auto sys = solver::assemble_system(comp, disc, {-0.2, 0.0});
  int M = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(i2i::compute_i2i(sys, {M, M}));
  }
}
BENCHMARK(BM_ImpedanceMap)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);
