#ifndef RSSKV_CLIENT_H_
#define RSSKV_CLIENT_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsskv/deployment.h"
#include "rsskv/snapshot.h"

namespace rsskv {

struct RwResult {
  bool committed = false;
  TxnId txn = 0;  // last attempt
  Timestamp t_c;
  int attempts = 0;
  Micros latency = 0;  // first invoke to final response, retries included
  std::map<Key, Value> reads;
};

struct RoResult {
  TxnId txn = 0;
  Timestamp t_read;
  Timestamp t_snap;
  Micros latency = 0;
  std::map<Key, Version> values;
  // True if the RO had to wait for a slow reply.
  bool waited_for_slow_reply = false;
};

// Client library of one service for one process: read-write transactions
// with two-phase commit and commit wait, read-only transactions, t_min and
// the real-time fence. At most one transaction is outstanding at a time.
class KvClient {
 public:
  using RwCallback = std::function<void(const RwResult&)>;
  using RoCallback = std::function<void(const RoResult&)>;
  using SignalHandler = std::function<void(NodeId from, const AppSignal&)>;

  KvClient(Deployment& deployment, KvService& service, ProcessId process, RegionId region);
  ~KvClient();
  KvClient(const KvClient&) = delete;
  KvClient& operator=(const KvClient&) = delete;

  // Reads `reads` under read locks, then writes every key in `writes`.
  void ReadWrite(std::vector<Key> reads, std::vector<Key> writes, RwCallback done);
  void ReadOnly(std::vector<Key> keys, RoCallback done);
  // Returns once TT.now.earliest > t_min + L.
  void Fence(std::function<void()> done);

  Timestamp t_min() const { return t_min_; }
  void AdvanceMinReadTs(Timestamp t) { t_min_ = std::max(t_min_, t); }

  bool busy() const { return rw_ || ro_ || fencing_; }
  NodeId node() const { return node_; }
  RegionId region() const { return region_; }
  ProcessId process() const { return process_; }
  KvService& service() { return service_; }

  void set_signal_handler(SignalHandler fn) { signal_handler_ = std::move(fn); }

 private:
  struct RwOp {
    std::vector<Key> reads;
    std::vector<Key> writes;
    RwCallback done;
    Timestamp age;
    Micros first_invoke = 0;
    int attempts = 0;
    // Current attempt.
    TxnId txn = 0;
    Timestamp start;
    Micros invoke = 0;
    bool committing = false;
    std::size_t reads_pending = 0;
    std::vector<ShardId> read_shards;
    std::map<Key, Value> read_values;
  };

  struct RoOp {
    TxnId txn = 0;
    std::vector<Key> keys;
    RoCallback done;
    Timestamp t_read;
    Micros invoke = 0;
    std::size_t fast_pending = 0;
    std::vector<Version> versions;
    PendingPrepared pending;
    std::map<TxnId, std::vector<KeyValue>> skipped_writes;
    std::vector<ROSlowReply> early_slow;
    std::optional<Timestamp> t_snap;
    bool waited = false;
  };

  void Handle(NodeId from, const Message& msg);
  void StartAttempt();
  void SendPrepares();
  void FinishAttempt(bool committed, Timestamp t_c);
  void OnReadReply(const ReadReply& m);
  void OnWounded(const Wounded& m);
  void OnCommitReply(const CommitReply& m);
  void OnFastReply(const ROFastReply& m);
  void OnSlowReply(const ROSlowReply& m);
  void ComputeSnapshot();
  void MaybeFinishRo();

  Micros Now() const { return deployment_.sim().now(); }
  TrueTimeInterval TTNow() const { return deployment_.truetime().Now(Now()); }
  void Send(ShardId shard, Message msg);

  Deployment& deployment_;
  KvService& service_;
  ProcessId process_;
  RegionId region_;
  NodeId node_;
  Timestamp t_min_;
  std::unique_ptr<RwOp> rw_;
  std::unique_ptr<RoOp> ro_;
  bool fencing_ = false;
  SignalHandler signal_handler_;
};

}  // namespace rsskv

#endif  // RSSKV_CLIENT_H_
