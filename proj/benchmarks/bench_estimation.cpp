#include <benchmark/benchmark.h>

#include "slrgdp/effects.hpp"
#include "slrgdp/model_specs.hpp"
#include "slrgdp/rolling.hpp"
#include "slrgdp/validation.hpp"

using namespace slrgdp;

namespace {

PanelDataset panel(int regions) {
  SyntheticDGP d;
  d.n_regions = regions;
  d.seed = 17;
  return generate_panel(d);
}

void BM_Absorb(benchmark::State& state) {
  const auto p = panel(static_cast<int>(state.range(0)));
  const auto spec = build_spec("adaptation");
  const auto dm = make_design(spec, p, select_rows(spec, p));
  for (auto _ : state) benchmark::DoNotOptimize(absorb_fixed_effects(dm));
  state.SetItemsProcessed(state.iterations() * dm.rows());
}
BENCHMARK(BM_Absorb)->Arg(79)->Arg(400)->Arg(2000);

void BM_FitPanel(benchmark::State& state) {
  const auto p = panel(static_cast<int>(state.range(0)));
  const auto spec = build_spec("adaptation");
  for (auto _ : state) benchmark::DoNotOptimize(fit_panel(spec, p));
}
BENCHMARK(BM_FitPanel)->Arg(79)->Arg(400)->Arg(2000);

void BM_DenseOracle(benchmark::State& state) {
  const auto p = panel(static_cast<int>(state.range(0)));
  const auto spec = build_spec("adaptation");
  for (auto _ : state) benchmark::DoNotOptimize(dense_dummy_ols(p, spec));
}
BENCHMARK(BM_DenseOracle)->Arg(30)->Arg(79);

void BM_Rolling(benchmark::State& state) {
  const auto p = panel(79);
  const auto spec = build_spec("linear");
  for (auto _ : state) benchmark::DoNotOptimize(rolling_fit(spec, p, 6, 1));
}
BENCHMARK(BM_Rolling);

void BM_EffectCurve(benchmark::State& state) {
  AdaptationCoefficients c;
  c.b << 675, -38, -33;
  c.vcov = Eigen::Vector3d(77841, 256, 225).asDiagonal();
  std::vector<double> grid;
  for (double s = 6500; s <= 9000; s += 1) grid.push_back(s);
  for (auto _ : state) {
    auto curve = effect_curve(c, grid);
    benchmark::DoNotOptimize(significance_threshold(curve));
  }
}
BENCHMARK(BM_EffectCurve);

}  // namespace
BENCHMARK_MAIN();
