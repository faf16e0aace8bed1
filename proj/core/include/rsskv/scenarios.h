#ifndef RSSKV_SCENARIOS_H_
#define RSSKV_SCENARIOS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rsskv/audit.h"
#include "rsskv/checker.h"
#include "rsskv/history.h"
#include "rsskv/latency_matrix.h"

namespace rsskv {

// A writer W updates x and y (invoke 0, respond 100). Reader R1 sees W's x
// during [40, 50]; reader R2 then sees the initial y during [60, 70]. RSS
// allows it; strict serializability does not.
std::vector<HistoryEvent> LitmusHistory();

// The three-region matrix plus a far region "AP" at `rtt` from every other
// region.
LatencyMatrix WithFarRegion(const LatencyMatrix& base, Micros rtt);

struct FenceScenarioOptions {
  bool fence = true;
  // false: the writer signals after its commit returns. true: a third
  // process that read the write signals instead.
  bool signal_from_observer = false;
};

struct ScenarioResult {
  bool completed = false;
  // Fence scenario: the reader saw the write. Composition: unused.
  bool observed = false;
  std::vector<HistoryEvent> history;
  Verdict verdict;  // RSS check of the history
  AuditReport audit;
  std::size_t fences = 0;
  std::string detail;
};

// Writer commits x and y (on different shards), optionally fences, then an
// out-of-band message without causal context triggers a reader's RO of both.
ScenarioResult RunFenceScenario(std::uint64_t seed, const FenceScenarioOptions& options);

// Two services A and B, each with one shard in CA and one in IR. Far-away
// writers update (x1, x2) at A and (y1, y2) at B at the same time. As soon
// as A's CA shard applies its write, a CA process reads x1 at A and then y2
// at B; as soon as B's IR shard applies, an IR process reads y1 at B and
// then x2 at A. With `use_librss` each service switch goes through the
// registry, which fences the previous service.
ScenarioResult RunCompositionScenario(std::uint64_t seed, bool use_librss);

}  // namespace rsskv

#endif  // RSSKV_SCENARIOS_H_
