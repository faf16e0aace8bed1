#ifndef RSSKV_REPLICATED_LOG_H_
#define RSSKV_REPLICATED_LOG_H_

#include <functional>
#include <string>
#include <vector>

#include "rsskv/latency_matrix.h"
#include "rsskv/simulator.h"
#include "rsskv/types.h"

namespace rsskv {

enum class LogEntryKind { kPrepare, kCommit, kNoop };

struct LogEntry {
  Timestamp ts;
  LogEntryKind kind = LogEntryKind::kNoop;
  TxnId txn = 0;
};

// Leader-based replicated log for one shard, modeled by its latency: an
// entry commits once the leader holds acks from the nearest majority of
// followers. Leaders are stable and always hold a valid lease.
class ReplicatedLog {
 public:
  using CommitCallback = std::function<void(Micros commit_time)>;

  ReplicatedLog(Simulator& sim, RegionId leader, std::vector<RegionId> followers,
                const LatencyMatrix& matrix, bool leader_lease = true);

  std::size_t replicas() const { return followers_.size() + 1; }
  // Time from append to majority ack: the RTT to the k-th nearest follower,
  // k = ceil((n+1)/2) - 1.
  Micros quorum_delay() const { return quorum_delay_; }

  // Appends an entry. Entries commit in append order.
  void Replicate(Timestamp ts, LogEntryKind kind, TxnId txn, CommitCallback on_commit);

  // Calls `ready` once reads at t_read are stable here. With the lease the
  // leader stamps a no-op just above t_read and proceeds immediately;
  // without it, waits for a committed write at or above t_read.
  void SafeTimeWait(Timestamp t_read, std::function<void()> ready);

  // Largest timestamp in the committed prefix.
  Timestamp max_write_ts() const { return max_write_ts_; }
  // Largest timestamp ever appended; every future entry exceeds it.
  Timestamp max_assigned_ts() const { return max_assigned_ts_; }

  const std::vector<LogEntry>& entries() const { return entries_; }
  std::size_t committed_prefix() const { return committed_prefix_; }
  bool leader_lease() const { return leader_lease_; }

  void DescribeBlocked(const std::string& who, std::vector<std::string>& out) const;

 private:
  void OnCommitted(std::size_t index, const CommitCallback& cb);

  Simulator& sim_;
  std::vector<RegionId> followers_;
  bool leader_lease_;
  Micros quorum_delay_ = 0;
  Micros last_commit_time_ = 0;
  std::vector<LogEntry> entries_;
  std::size_t committed_prefix_ = 0;
  Timestamp max_write_ts_;
  Timestamp max_assigned_ts_;
  std::vector<std::pair<Timestamp, std::function<void()>>> safe_time_waiters_;
};

}  // namespace rsskv

#endif  // RSSKV_REPLICATED_LOG_H_
