#ifndef RSSKV_COORDINATOR_PLANNER_H_
#define RSSKV_COORDINATOR_PLANNER_H_

#include <cstdint>
#include <vector>

#include "rsskv/latency_matrix.h"
#include "rsskv/types.h"

namespace rsskv {

struct CoordinatorChoice {
  ShardId coordinator = 0;
  Micros estimate = 0;  // estimated commit latency seen by the client
};

// Precomputed coordinator choice for every (client region, participant set).
//
// For coordinator c the estimate is
//   ready = max(ow(client, c), max over p != c of ow(client, p) + repl(p) + ow(p, c))
//   total = ready + repl(c) + ow(c, client)
// where ow is one-way latency and repl the shard's quorum delay. The
// coordinator's own prepare is not replicated. Ties go to the coordinator
// nearest the client, then to the lowest shard id.
class CoordinatorPlanner {
 public:
  static constexpr std::size_t kMaxShards = 16;

  CoordinatorPlanner(const LatencyMatrix& matrix, std::vector<RegionId> leader_regions,
                     std::vector<Micros> quorum_delays);

  CoordinatorChoice Choose(RegionId client, const std::vector<ShardId>& participants) const;
  // Largest estimate over all client regions and participant sets.
  Micros max_estimate() const { return max_estimate_; }

  static CoordinatorChoice Evaluate(const LatencyMatrix& matrix,
                                    const std::vector<RegionId>& leader_regions,
                                    const std::vector<Micros>& quorum_delays, RegionId client,
                                    const std::vector<ShardId>& participants);

 private:
  std::size_t shards_;
  std::vector<CoordinatorChoice> table_;  // [region][mask]
  Micros max_estimate_ = 0;
};

}  // namespace rsskv

#endif  // RSSKV_COORDINATOR_PLANNER_H_
