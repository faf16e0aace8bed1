#ifndef RSSKV_DEPLOYMENT_H_
#define RSSKV_DEPLOYMENT_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsskv/coordinator_planner.h"
#include "rsskv/history.h"
#include "rsskv/shard.h"

namespace rsskv {

struct ServiceConfig {
  std::string name = "kv";
  ConsistencyMode mode = ConsistencyMode::kRss;
  // One leader region per shard.
  std::vector<RegionId> leader_regions;
  std::size_t replicas_per_shard = 3;
  // Regions followers are drawn from, in preference order. Empty means every
  // region of the matrix.
  std::vector<RegionId> replica_regions;
  bool leader_lease = true;
  bool skipped_writes_in_fast_reply = true;
  bool adjust_t_ee_for_blocking = true;
  // Fence bound L. Zero picks 3 * (largest commit estimate + 2 * epsilon).
  Micros fence_bound = 0;
  // Extra attempts after an abort before giving up.
  int max_retries = 20;
};

// Facts clients report for the post-run audits.
struct RwAuditRecord {
  std::string service;
  TxnId txn = 0;
  Micros invoke = 0;
  Micros respond = 0;
  Timestamp t_c;
  Timestamp t_ee_min;
  std::vector<Key> reads;
  std::vector<Key> writes;
};

struct RoAuditRecord {
  std::string service;
  TxnId txn = 0;
  Timestamp t_read;
  Timestamp t_snap;
  std::map<Key, Version> values;
};

struct AuditLog {
  std::vector<RwAuditRecord> rw;
  std::vector<RoAuditRecord> ro;
};

class Deployment;

// One sharded, replicated key-value service.
class KvService {
 public:
  KvService(Deployment& deployment, ServiceConfig config);
  KvService(const KvService&) = delete;
  KvService& operator=(const KvService&) = delete;

  const std::string& name() const { return config_.name; }
  const ServiceConfig& config() const { return config_; }
  ConsistencyMode mode() const { return config_.mode; }
  std::size_t shard_count() const { return shards_.size(); }
  Shard& shard(ShardId id) { return *shards_.at(id); }
  const Shard& shard(ShardId id) const { return *shards_.at(id); }
  NodeId shard_node(ShardId id) const { return shards_.at(id)->node(); }

  // Static hash partitioning.
  ShardId ShardOf(Key key) const;

  const CoordinatorPlanner& planner() const { return *planner_; }
  Micros fence_bound() const { return fence_bound_; }

  void set_apply_observer(Shard::ApplyObserver fn);

 private:
  ServiceConfig config_;
  std::vector<std::unique_ptr<Shard>> shards_;
  std::unique_ptr<CoordinatorPlanner> planner_;
  Micros fence_bound_ = 0;
};

// Everything one simulated run shares: event loop, network, clock,
// identifier sources, services, history sink and audit log.
class Deployment {
 public:
  Deployment(std::uint64_t seed, LatencyMatrix matrix, TrueTimeConfig tt = {},
             NetworkConfig net = {});
  Deployment(const Deployment&) = delete;
  Deployment& operator=(const Deployment&) = delete;

  Simulator& sim() { return sim_; }
  MessageNetwork& net() { return net_; }
  const TrueTime& truetime() const { return tt_; }
  const LatencyMatrix& matrix() const { return net_.matrix(); }

  KvService& AddService(ServiceConfig config);
  KvService& service(std::size_t i) { return *services_.at(i); }
  KvService& service(const std::string& name);
  std::size_t service_count() const { return services_.size(); }

  TxnId NextTxnId() { return next_txn_++; }
  ProcessId NewProcess() { return next_process_++; }
  std::uint64_t NextMessageId() { return next_message_++; }

  // Events from processes the filter rejects are not recorded. No filter
  // records everything; recording can also be switched off entirely.
  void set_history_enabled(bool on) { history_enabled_ = on; }
  void set_history_filter(std::function<bool(ProcessId)> filter) {
    history_filter_ = std::move(filter);
  }
  void Record(HistoryEvent event);
  HistoryRecorder& history() { return history_; }

  AuditLog& audit() { return audit_; }
  const AuditLog& audit() const { return audit_; }
  // Transactions whose t_c - t_ee exceeded the fence bound.
  std::vector<std::string>& bound_violations() { return bound_violations_; }

 private:
  Simulator sim_;
  TrueTime tt_;
  MessageNetwork net_;
  std::vector<std::unique_ptr<KvService>> services_;
  TxnId next_txn_ = 1;
  ProcessId next_process_ = 1;
  std::uint64_t next_message_ = 1;
  bool history_enabled_ = true;
  std::function<bool(ProcessId)> history_filter_;
  HistoryRecorder history_;
  AuditLog audit_;
  std::vector<std::string> bound_violations_;
};

std::string HistoryKey(const std::string& service, Key key);

}  // namespace rsskv

#endif  // RSSKV_DEPLOYMENT_H_
