#include <benchmark/benchmark.h>

#include "dgh/characteristics.hpp"
#include "dgh/evolution.hpp"
#include "dgh/fourier.hpp"
#include "dgh/presets.hpp"

namespace {

dgh::Parameters params() { return dgh::Parameters::make(1.0, 0.0, 0.0); }

void BM_ForwardInverseFFT(benchmark::State& st) {
  const dgh::Grid grid(20.0, static_cast<std::size_t>(st.range(0)));
  const dgh::Spectral sp(grid);
  const dgh::Field u = dgh::ic_preset(dgh::PresetSpec::named("gaussian_bump"), grid, params());
  for (auto _ : st) {
    auto c = sp.analyse(u.values());
    benchmark::DoNotOptimize(sp.synthesise(c));
  }
}
BENCHMARK(BM_ForwardInverseFFT)->Arg(1024)->Arg(4096);

void BM_RightHandSide(benchmark::State& st) {
  const dgh::Grid grid(20.0, static_cast<std::size_t>(st.range(0)));
  const dgh::NonlocalOperator op(grid, params());
  const dgh::RightHandSide rhs(op);
  const dgh::Field u =
      dgh::ic_preset(dgh::PresetSpec::named("gaussian_derivative"), grid, params());
  dgh::RightHandSide::Evaluation ev;
  for (auto _ : st) {
    rhs.evaluate(u.values(), {}, ev);
    benchmark::DoNotOptimize(ev.u_t.data());
  }
}
BENCHMARK(BM_RightHandSide)->Arg(1024)->Arg(4096);

void BM_Step(benchmark::State& st) {
  const dgh::Grid grid(20.0, static_cast<std::size_t>(st.range(0)));
  const dgh::NonlocalOperator op(grid, params());
  const dgh::State s(0.0,
                     dgh::ic_preset(dgh::PresetSpec::named("gaussian_derivative"), grid, params()),
                     std::nullopt);
  for (auto _ : st) benchmark::DoNotOptimize(dgh::step_rk4(s, 1e-3, op));
}
BENCHMARK(BM_Step)->Arg(1024)->Arg(4096);

void BM_SimulateToBreaking(benchmark::State& st) {
  const dgh::Grid grid(20.0, 2048);
  const dgh::NonlocalOperator op(grid, params());
  const dgh::State s(0.0,
                     dgh::ic_preset(dgh::PresetSpec::named("gaussian_derivative", 2.0), grid,
                                    params()),
                     std::nullopt);
  dgh::SolverConfig cfg;
  cfg.t_max = 2.0;
  for (auto _ : st) benchmark::DoNotOptimize(dgh::simulate(s, cfg, op).report);
}
BENCHMARK(BM_SimulateToBreaking)->Unit(benchmark::kMillisecond);

void BM_Advect(benchmark::State& st) {
  const dgh::Grid grid(20.0, 2048);
  const dgh::NonlocalOperator op(grid, params());
  const dgh::State s(0.0,
                     dgh::ic_preset(dgh::PresetSpec::named("gaussian_bump"), grid, params()),
                     std::nullopt);
  dgh::SolverConfig cfg;
  const auto run = dgh::simulate(s, cfg, op);
  const double seeds[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(dgh::advect_many(run.trajectory, seeds, op));
}
BENCHMARK(BM_Advect)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
