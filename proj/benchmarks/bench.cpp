#include <benchmark/benchmark.h>

#include <cmath>

#include <lanemden/gamma_constants.hpp>
#include <lanemden/green.hpp>
#include <lanemden/laplacian.hpp>
#include <lanemden/reduced_energy.hpp>
#include <lanemden/solver.hpp>
#include <lanemden/transform.hpp>

using namespace lanemden;

namespace {
const AnnulusGeometry kGeo{3, 1.0, 3.0};
}

static void BM_GammaQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gamma_constants(n));
}
BENCHMARK(BM_GammaQuadrature)->DenseRange(3, 7);

static void BM_MinimizePhi(benchmark::State& state) {
  const PhiCase c = state.range(0) == 0 ? PhiCase::single : PhiCase::pair;
  const EnergyExpansion e = EnergyExpansion::unit(3);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_phi(c, e));
}
BENCHMARK(BM_MinimizePhi)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_LaplacianApply(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  const GridPtr g = MeridianGrid::uniform(kGeo, nr, (nr - 1) / 2 + 1);
  const auto lap = AxisymmetricLaplacian::for_grid(g);
  const MeridianField u = MeridianField::sample(g, [](double r, double phi) { return r * r * std::cos(phi); });
  for (auto _ : state) benchmark::DoNotOptimize(lap->apply(u));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g->size()));
}
BENCHMARK(BM_LaplacianApply)->Arg(129)->Arg(257)->Arg(513);

static void BM_ProjectBubble(benchmark::State& state) {
  const GridPtr g = MeridianGrid::uniform(kGeo, 257, 129);
  const Bubble b = Bubble::on_axis(3, 0.05, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(project_bubble(g, b));
}
BENCHMARK(BM_ProjectBubble)->Unit(benchmark::kMillisecond);

static void BM_LiftedResidual(benchmark::State& state) {
  const GridPtr g = MeridianGrid::uniform(kGeo, 129, 65);
  const MeridianField u = MeridianField::sample(g, [](double r, double phi) { return (r - 1) * (3 - r) * (1 + std::cos(phi)); });
  for (auto _ : state) benchmark::DoNotOptimize(lifted_residual_check(u, 0.05));
}
BENCHMARK(BM_LiftedResidual)->Unit(benchmark::kMillisecond);

static void BM_ReducedMultipliers(benchmark::State& state) {
  const BranchSpec spec = BranchSpec::make(TheoremCase::i);
  PresolveOptions opts;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        reduced_multipliers(kGeo, spec, 0.05, {BubblePair{1, 0.098, 0.5}}, AmplitudeMode::weighted, opts));
}
BENCHMARK(BM_ReducedMultipliers)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
