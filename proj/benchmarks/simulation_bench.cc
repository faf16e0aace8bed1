#include <benchmark/benchmark.h>

#include "rsskv/experiment.h"

namespace rsskv {
namespace {

// Simulated seconds of the three-region workload per iteration.
void BM_Simulate(benchmark::State& state) {
  RunConfig c;
  c.mode = state.range(0) == 0 ? ConsistencyMode::kStrictSerializable : ConsistencyMode::kRss;
  c.workload.num_keys = 10'000'000;
  c.lambda = 12;
  c.duration = 30 * kSeconds;
  c.record_history = false;
  std::uint64_t events = 0;
  for (auto _ : state) {
    const RunOutput out = RunExperiment(c);
    events += out.events;
    ++c.seed;
  }
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
  state.SetLabel(ModeName(c.mode));
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace rsskv
