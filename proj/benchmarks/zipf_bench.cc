#include <benchmark/benchmark.h>

#include "rsskv/simulator.h"
#include "rsskv/zipf.h"

namespace rsskv {
namespace {

void BM_ZipfSample(benchmark::State& state) {
  const ZipfGenerator zipf(static_cast<std::uint64_t>(state.range(0)), 0.9);
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(zipf.Sample(rng));
}
BENCHMARK(BM_ZipfSample)->Arg(1'000)->Arg(10'000'000);

}  // namespace
}  // namespace rsskv
