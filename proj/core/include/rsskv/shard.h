#ifndef RSSKV_SHARD_H_
#define RSSKV_SHARD_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rsskv/lock_table.h"
#include "rsskv/messages.h"
#include "rsskv/network.h"
#include "rsskv/replicated_log.h"
#include "rsskv/truetime.h"
#include "rsskv/version_store.h"

namespace rsskv {

using MessageNetwork = Network<Message>;

struct ShardOptions {
  ConsistencyMode mode = ConsistencyMode::kRss;
  // Return a skipped transaction's buffered writes in the fast reply.
  bool skipped_writes_in_fast_reply = true;
  // Add the time a prepare waited for write locks to its t_ee.
  bool adjust_t_ee_for_blocking = true;
};

// An in-flight read-write transaction prepared at this shard.
struct PreparedRecord {
  TxnId txn = 0;
  Timestamp t_p;
  Timestamp t_ee;
  std::vector<KeyValue> writes;
};

// Leader of one shard: locks, prepared set, versioned storage, two-phase
// commit in both roles, and the read-only handler.
class Shard {
 public:
  // Called right after a commit's writes are applied here.
  using ApplyObserver = std::function<void(ShardId, TxnId, Timestamp t_c)>;

  Shard(ShardId id, Simulator& sim, MessageNetwork& net, const TrueTime& tt,
        RegionId region, std::vector<RegionId> followers, bool leader_lease,
        ShardOptions options);
  Shard(const Shard&) = delete;
  Shard& operator=(const Shard&) = delete;

  ShardId id() const { return id_; }
  NodeId node() const { return node_; }
  RegionId region() const { return region_; }
  // Nodes of every shard of the service, indexed by shard id.
  void set_peers(std::vector<NodeId> peers) { peers_ = std::move(peers); }
  void set_apply_observer(ApplyObserver fn) { apply_observer_ = std::move(fn); }

  const VersionStore& store() const { return store_; }
  const ReplicatedLog& log() const { return log_; }
  const std::map<TxnId, PreparedRecord>& prepared() const { return prepared_; }
  const LockTable& locks() const { return locks_; }
  // Largest timestamp this shard has assigned or applied.
  Timestamp max_ts() const { return max_ts_; }
  std::size_t pending_ro_count() const { return blocked_ros_.size(); }
  std::size_t subscription_count() const;

  void DescribeBlocked(std::vector<std::string>& out) const;

 private:
  enum class Phase { kExecuting, kPreparing, kPrepared, kCommitting };

  struct TxnState {
    LockAge age;
    NodeId client = kNoNode;
    Phase phase = Phase::kExecuting;
    std::optional<Prepare> prepare;
    Micros prepare_arrival = 0;
    bool wound_requested = false;
  };

  struct CoordinatorState {
    std::optional<Prepare> prepare;
    std::set<ShardId> ok;
    Timestamp max_t_p;
    Timestamp t_ee_max;
    std::optional<Timestamp> t_ee_min;
    bool abort_requested = false;
  };

  struct BlockedRo {
    NodeId client;
    ROCommit request;
  };

  struct Subscription {
    NodeId client;
    TxnId ro;
    std::vector<Key> keys;
  };

  void Handle(NodeId from, const Message& msg);
  void OnReadRequest(NodeId from, const ReadRequest& m);
  void OnAbortTxn(const AbortTxn& m);
  void OnPrepare(const Prepare& m);
  void OnPrepareOk(const PrepareOk& m);
  void OnPrepareFail(const PrepareFail& m);
  void OnWoundRequest(const WoundRequest& m);
  void OnDecide(const Decide& m);
  void OnROCommit(NodeId from, const ROCommit& m);

  // Calls `done` once every key is locked in `mode`.
  void AcquireAll(TxnId txn, const LockAge& age, const std::vector<Key>& keys, LockMode mode,
                  std::function<void()> done);
  void FinishPrepare(TxnId txn);
  void PrepareFailedLocally(const Prepare& prepare);
  void OnWound(TxnId victim);
  void AbortLocal(TxnId txn);

  CoordinatorState& Coord(TxnId txn);
  void MaybeDecide(TxnId txn);
  void CoordinatorAbort(TxnId txn);
  void ApplyCommit(TxnId txn, Timestamp t_c);
  void RemovePrepared(TxnId txn, Outcome outcome, Timestamp t_c);

  bool Conflicts(const PreparedRecord& p, const std::vector<Key>& keys) const;
  bool Blocks(const PreparedRecord& p, const ROCommit& ro) const;
  bool TryFinishRo(NodeId client, const ROCommit& ro);
  void RecheckBlockedRos();

  void Send(NodeId to, Message msg) { net_.Send(node_, to, std::move(msg)); }
  Timestamp NextTimestamp();

  ShardId id_;
  Simulator& sim_;
  MessageNetwork& net_;
  const TrueTime& tt_;
  RegionId region_;
  ShardOptions options_;
  NodeId node_;
  std::vector<NodeId> peers_;
  ReplicatedLog log_;
  LockTable locks_;
  VersionStore store_;
  Timestamp max_ts_;

  std::unordered_map<TxnId, TxnState> txns_;
  std::map<TxnId, PreparedRecord> prepared_;
  std::unordered_map<TxnId, CoordinatorState> coordinating_;
  std::unordered_set<TxnId> aborted_;
  std::unordered_set<TxnId> decided_;
  std::vector<BlockedRo> blocked_ros_;
  std::unordered_map<TxnId, std::vector<Subscription>> subscriptions_;
  ApplyObserver apply_observer_;
};

}  // namespace rsskv

#endif  // RSSKV_SHARD_H_
