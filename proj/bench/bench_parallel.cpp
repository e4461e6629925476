// Serial reference vs OpenMP kernels on the worked example.
#include <benchmark/benchmark.h>

#include <vector>

#include "proxama/batch.hpp"
#include "proxama/diagnostics.hpp"
#include "proxama/kernels.hpp"
#include "proxama/paper_example.hpp"
#include "proxama/schedules.hpp"

using namespace proxama;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

/// All variants, each from a handful of shifted starts, as independent continuous runs.
std::vector<RunSpec> batch_specs(RunMethod method, double horizon) {
  std::vector<RunSpec> specs;
  for (const auto& v : example::all_variants()) {
    for (int k = 0; k < 4; ++k) {
      PrimalDualState start = example::start();
      start.x.array() += k;
      IntegrateOptions o;
      o.method = method == RunMethod::continuous_rk4 ? Integrator::rk4 : Integrator::euler;
      o.step = 0.01;
      o.horizon = horizon;
      o.record_every = 1000;
      specs.push_back(RunSpec{method, example::schedules(v.c, v.tc), start, SolveConfig{}, o});
    }
  }
  return specs;
}

void BM_RunBatchRk4(benchmark::State& state) {
  const auto p = example::problem();
  const auto specs = batch_specs(RunMethod::continuous_rk4, 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(p, specs, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(specs.size()));
  label(state);
}
BENCHMARK(BM_RunBatchRk4)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RunBatchProxAma(benchmark::State& state) {
  const auto p = example::problem();
  const auto specs = batch_specs(RunMethod::prox_ama, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(p, specs, exec_of(state)));
  label(state);
}
BENCHMARK(BM_RunBatchProxAma)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MinEigenvaluesOnGrid(benchmark::State& state) {
  const auto s = example::schedules(example::CChoice::c1_decay, example::TauCChoice::tc099);
  const auto grid = default_grid();
  auto at = [&](double t) { return s.m2.at(t); };
  for (auto _ : state) benchmark::DoNotOptimize(min_eigenvalues_on_grid(at, grid, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(grid.size()));
  label(state);
}
BENCHMARK(BM_MinEigenvaluesOnGrid)->Arg(0)->Arg(1)->UseRealTime();

void BM_OperatorNormsOnGrid(benchmark::State& state) {
  const auto s = example::schedules(example::CChoice::c1_decay, example::TauCChoice::tc099);
  const auto grid = default_grid();
  auto at = [&](double t) { return s.m2.at(t); };
  for (auto _ : state) benchmark::DoNotOptimize(operator_norms_on_grid(at, grid, exec_of(state)));
  label(state);
}
BENCHMARK(BM_OperatorNormsOnGrid)->Arg(0)->Arg(1)->UseRealTime();

void BM_AttachEnergy(benchmark::State& state) {
  const auto p = example::problem();
  const auto s = example::schedules(example::CChoice::c025, example::TauCChoice::tc099);
  IntegrateOptions o;
  o.step = 0.01;
  o.horizon = 50.0;
  const auto base = integrate(p, s, example::start(), o);
  const EnergyFunctional fn(p, s, compute_reference(p, s));
  for (auto _ : state) {
    Trajectory traj = base;
    attach_energy(traj, fn, exec_of(state));
    benchmark::DoNotOptimize(traj);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(base.samples.size()));
  label(state);
}
BENCHMARK(BM_AttachEnergy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
