#include "rsskv/deployment.h"

#include <algorithm>
#include <stdexcept>

namespace rsskv {

KvService::KvService(Deployment& deployment, ServiceConfig config) : config_(std::move(config)) {
  const LatencyMatrix& matrix = deployment.matrix();
  if (config_.leader_regions.empty()) throw std::invalid_argument("service without shards");
  if (config_.replicas_per_shard == 0) throw std::invalid_argument("zero replicas");
  std::vector<RegionId> candidates = config_.replica_regions;
  if (candidates.empty()) {
    for (RegionId r = 0; r < matrix.size(); ++r) candidates.push_back(r);
  }
  ShardOptions options;
  options.mode = config_.mode;
  options.skipped_writes_in_fast_reply = config_.skipped_writes_in_fast_reply;
  options.adjust_t_ee_for_blocking = config_.adjust_t_ee_for_blocking;
  std::vector<Micros> quorum_delays;
  for (ShardId s = 0; s < config_.leader_regions.size(); ++s) {
    const RegionId leader = config_.leader_regions[s];
    if (leader >= matrix.size()) throw std::invalid_argument("leader region out of range");
    std::vector<RegionId> followers;
    for (RegionId r : candidates) {
      if (followers.size() + 1 >= config_.replicas_per_shard) break;
      if (r != leader) followers.push_back(r);
    }
    // With fewer candidate regions than replicas, extra replicas share the
    // leader's region.
    while (followers.size() + 1 < config_.replicas_per_shard) followers.push_back(leader);
    shards_.push_back(std::make_unique<Shard>(s, deployment.sim(), deployment.net(),
                                              deployment.truetime(), leader, followers,
                                              config_.leader_lease, options));
    quorum_delays.push_back(shards_.back()->log().quorum_delay());
  }
  std::vector<NodeId> peers;
  for (const auto& s : shards_) peers.push_back(s->node());
  for (auto& s : shards_) s->set_peers(peers);
  planner_ = std::make_unique<CoordinatorPlanner>(matrix, config_.leader_regions, quorum_delays);
  fence_bound_ = config_.fence_bound > 0
                     ? config_.fence_bound
                     : 3 * (planner_->max_estimate() + 2 * deployment.truetime().epsilon());
}

ShardId KvService::ShardOf(Key key) const {
  return static_cast<ShardId>(SplitMix64(key) % shards_.size());
}

void KvService::set_apply_observer(Shard::ApplyObserver fn) {
  for (auto& s : shards_) s->set_apply_observer(fn);
}

Deployment::Deployment(std::uint64_t seed, LatencyMatrix matrix, TrueTimeConfig tt,
                       NetworkConfig net)
    : sim_(seed), tt_(tt), net_(sim_, std::move(matrix), net, &MessageName) {
  sim_.AddWaiterReporter([this](std::vector<std::string>& out) {
    for (const auto& svc : services_) {
      for (ShardId s = 0; s < svc->shard_count(); ++s) svc->shard(s).DescribeBlocked(out);
    }
  });
}

KvService& Deployment::AddService(ServiceConfig config) {
  for (const auto& s : services_) {
    if (s->name() == config.name) throw std::invalid_argument("duplicate service " + config.name);
  }
  services_.push_back(std::make_unique<KvService>(*this, std::move(config)));
  return *services_.back();
}

KvService& Deployment::service(const std::string& name) {
  for (auto& s : services_) {
    if (s->name() == name) return *s;
  }
  throw std::invalid_argument("unknown service " + name);
}

void Deployment::Record(HistoryEvent event) {
  if (!history_enabled_) return;
  if (history_filter_ && !history_filter_(event.process)) return;
  history_.Record(std::move(event));
}

std::string HistoryKey(const std::string& service, Key key) {
  return service + "/" + std::to_string(key);
}

}  // namespace rsskv
