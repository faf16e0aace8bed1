#include <benchmark/benchmark.h>

#include "rsskv/checker.h"
#include "rsskv/experiment.h"
#include "rsskv/scenarios.h"

namespace rsskv {
namespace {

void BM_CheckLitmus(benchmark::State& state) {
  const auto h = LitmusHistory();
  const auto model = static_cast<Model>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Check(h, model));
  state.SetLabel(ModelName(model));
}
BENCHMARK(BM_CheckLitmus)->DenseRange(0, 2);

// Histories recorded from small closed-loop runs; range is transactions
// per client with three clients.
void BM_CheckSimulatedHistory(benchmark::State& state) {
  RunConfig c;
  c.leader_regions = {0, 1};
  c.workload.num_keys = 8;
  c.client_model = ClientModel::kClosed;
  c.closed_clients = 3;
  c.txns_per_client = static_cast<int>(state.range(0));
  const auto history = RunExperiment(c).history;
  CheckOptions options;
  options.max_units = 64;
  options.time_limit_seconds = 60;
  std::uint64_t states = 0;
  for (auto _ : state) {
    const Verdict v = Check(history, Model::kRss, options);
    states = v.states_explored;
    benchmark::DoNotOptimize(v);
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_CheckSimulatedHistory)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace rsskv
