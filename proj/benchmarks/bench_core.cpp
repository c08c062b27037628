#include <benchmark/benchmark.h>

#include "eqone/angmom.hpp"
#include "eqone/faraday.hpp"
#include "eqone/protocol.hpp"
#include "eqone/rng.hpp"

using namespace eqone;

static void BM_BuildSpinSystem(benchmark::State& state) {
  const angmom::SpinQuantumNumber j(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(angmom::build_spin_system(j));
}
BENCHMARK(BM_BuildSpinSystem)->Arg(1)->Arg(20)->Arg(200);

static void BM_EvolveJy(benchmark::State& state) {
  const auto s = angmom::build_spin_system(angmom::SpinQuantumNumber(static_cast<int>(state.range(0))));
  const auto psi = angmom::max_projection_state(s, {1.0, 0.0, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(angmom::evolve(psi, s.jy(), 0.3));
}
BENCHMARK(BM_EvolveJy)->Arg(1)->Arg(20)->Arg(200);

static void BM_PhiloxBlock(benchmark::State& state) {
  const rng::CounterStream stream(42, 0);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stream.block(i++));
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_PhiloxBlock);

static void BM_Campaign(benchmark::State& state) {
  protocol::ProtocolConfig cfg;
  cfg.j = angmom::SpinQuantumNumber(static_cast<int>(state.range(0)));
  cfg.omega = 0.01;
  cfg.n_spins = 1000;
  cfg.n_reps = 1000;
  const auto s = angmom::build_spin_system(cfg.j);
  std::uint64_t campaign = 0;
  for (auto _ : state) benchmark::DoNotOptimize(protocol::run_campaign(s, cfg, campaign++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.shots()));
}
BENCHMARK(BM_Campaign)->Arg(1)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_OptimizeOpticalDepth(benchmark::State& state) {
  faraday::OpticalMedium m;
  for (auto _ : state) benchmark::DoNotOptimize(faraday::optimize_optical_depth(m));
}
BENCHMARK(BM_OptimizeOpticalDepth);

BENCHMARK_MAIN();
