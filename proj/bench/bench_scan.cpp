// Serial against OpenMP ordered_map on an m-function ray scan.

#include <benchmark/benchmark.h>

#include "weylhelp/mfun.hpp"
#include "weylhelp/scan.hpp"

using namespace weylhelp;

namespace {

void scan(benchmark::State& state, Exec exec, const SideMeasure& side) {
  const Weight w = odd_weight(side);
  const auto y = log_grid(1e-3, 1e6, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto v = ordered_map(
        y.size(), [&](std::size_t i) { return m_ell(Side::plus, w, cplx(0.5 * y[i], y[i])).value; }, exec);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(y.size()));
}

void BM_ConstantSerial(benchmark::State& s) { scan(s, Exec::serial, constant_density()); }
void BM_ConstantParallel(benchmark::State& s) { scan(s, Exec::parallel, constant_density()); }
void BM_LogflatSerial(benchmark::State& s) { scan(s, Exec::serial, logflat_density()); }
void BM_LogflatParallel(benchmark::State& s) { scan(s, Exec::parallel, logflat_density()); }

}  // namespace

BENCHMARK(BM_ConstantSerial)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConstantParallel)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LogflatSerial)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LogflatParallel)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
