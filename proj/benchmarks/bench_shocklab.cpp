#include <benchmark/benchmark.h>

#include "shocklab/asep_exact.hpp"
#include "shocklab/asep_mc.hpp"
#include "shocklab/duality.hpp"
#include "shocklab/limit_process.hpp"
#include "shocklab/prelimit.hpp"
#include "shocklab/specfun.hpp"

using namespace shocklab;

namespace {

const BoundaryParams kFan{0.5, -0.2, 0.5, -0.2, 0.3};

void BM_calH(benchmark::State& st) {
  double x = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(calH(x, -1.0));
    x += 1e-9;
  }
}
BENCHMARK(BM_calH);

void BM_qpoch(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(qpoch(0.37, 0.9));
}
BENCHMARK(BM_qpoch);

void BM_exact_stationary(benchmark::State& st) {
  const RateParams r = boundary_to_rates(kFan);
  for (auto _ : st) benchmark::DoNotOptimize(stationary(r, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_exact_stationary)->Arg(6)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_prelimit_laplace(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  LaplaceRequest req{{1.0}, {0.7}};
  if (d == 2) req = {{0.5, 1.0}, {0.8, 0.5}};
  if (d == 3) req = {{1.0 / 3, 2.0 / 3, 1.0}, {0.5, 0.2, 0.9}};
  for (auto _ : st) benchmark::DoNotOptimize(prelimit_height_laplace(req, kFan, 8));
}
BENCHMARK(BM_prelimit_laplace)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_z_n_large(benchmark::State& st) {
  const long n = st.range(0);
  const BoundaryParams bp = scaling_sequence({0.5, -1.0, -0.2, -0.2, 0.3}, n).params;
  for (auto _ : st) benchmark::DoNotOptimize(z_n(bp, n));
}
BENCHMARK(BM_z_n_large)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_limit_laplace_d2(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(limit_height_laplace({0.5, -1.0}, {0.5, 1.0}, {1.0, 1.0}));
}
BENCHMARK(BM_limit_laplace_d2)->Unit(benchmark::kMillisecond);

void BM_duality_d2(benchmark::State& st) {
  const DualityInstance inst{0.5, -1.0, {0.5, 1.0}, {0.7, 0.9}};
  const PhiForm form = st.range(0) ? PhiForm::Cauchy : PhiForm::Killed;
  for (auto _ : st) benchmark::DoNotOptimize(duality_residual(inst, form));
}
BENCHMARK(BM_duality_d2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_simulate_events(benchmark::State& st) {
  SimulationPlan plan;
  plan.params = RateParams{1.0, 1.0, 0.0, 0.0, 0.0};
  plan.n = static_cast<int>(st.range(0));
  plan.burn_in_events = 100000;
  plan.thin_events = plan.n;
  plan.samples = 100;
  long events = 0;
  for (auto _ : st) {
    const auto s = simulate(plan);
    events += s.events;
  }
  st.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_simulate_events)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
