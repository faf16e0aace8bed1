#include "rsskv/coordinator_planner.h"

#include <algorithm>
#include <stdexcept>

namespace rsskv {

CoordinatorChoice CoordinatorPlanner::Evaluate(const LatencyMatrix& matrix,
                                               const std::vector<RegionId>& leader_regions,
                                               const std::vector<Micros>& quorum_delays,
                                               RegionId client,
                                               const std::vector<ShardId>& participants) {
  if (participants.empty()) throw std::invalid_argument("no participants");
  CoordinatorChoice best;
  Micros best_distance = 0;
  bool have = false;
  for (ShardId c : participants) {
    const RegionId cr = leader_regions.at(c);
    Micros ready = matrix.OneWay(client, cr);
    for (ShardId p : participants) {
      if (p == c) continue;
      const RegionId pr = leader_regions.at(p);
      ready = std::max(ready, matrix.OneWay(client, pr) + quorum_delays.at(p) +
                                  matrix.OneWay(pr, cr));
    }
    const Micros total = ready + quorum_delays.at(c) + matrix.OneWay(cr, client);
    const Micros distance = matrix.Rtt(client, cr);
    const bool better =
        !have || total < best.estimate ||
        (total == best.estimate &&
         (distance < best_distance || (distance == best_distance && c < best.coordinator)));
    if (better) {
      best = CoordinatorChoice{c, total};
      best_distance = distance;
      have = true;
    }
  }
  return best;
}

CoordinatorPlanner::CoordinatorPlanner(const LatencyMatrix& matrix,
                                       std::vector<RegionId> leader_regions,
                                       std::vector<Micros> quorum_delays)
    : shards_(leader_regions.size()) {
  if (shards_ == 0 || shards_ > kMaxShards) {
    throw std::invalid_argument("shard count must be in [1, 16]");
  }
  if (quorum_delays.size() != shards_) throw std::invalid_argument("quorum delay per shard");
  const std::size_t masks = std::size_t{1} << shards_;
  table_.resize(matrix.size() * masks);
  std::vector<ShardId> participants;
  for (RegionId r = 0; r < matrix.size(); ++r) {
    for (std::size_t mask = 1; mask < masks; ++mask) {
      participants.clear();
      for (ShardId s = 0; s < shards_; ++s) {
        if (mask & (std::size_t{1} << s)) participants.push_back(s);
      }
      const auto choice = Evaluate(matrix, leader_regions, quorum_delays, r, participants);
      table_[r * masks + mask] = choice;
      max_estimate_ = std::max(max_estimate_, choice.estimate);
    }
  }
}

CoordinatorChoice CoordinatorPlanner::Choose(RegionId client,
                                             const std::vector<ShardId>& participants) const {
  std::size_t mask = 0;
  for (ShardId s : participants) mask |= std::size_t{1} << s;
  if (mask == 0) throw std::invalid_argument("no participants");
  return table_.at(client * (std::size_t{1} << shards_) + mask);
}

}  // namespace rsskv
