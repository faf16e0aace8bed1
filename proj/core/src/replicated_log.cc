#include "rsskv/replicated_log.h"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace rsskv {

ReplicatedLog::ReplicatedLog(Simulator& sim, RegionId leader, std::vector<RegionId> followers,
                             const LatencyMatrix& matrix, bool leader_lease)
    : sim_(sim), followers_(std::move(followers)), leader_lease_(leader_lease) {
  std::vector<Micros> rtts;
  for (RegionId f : followers_) rtts.push_back(matrix.Rtt(leader, f));
  std::sort(rtts.begin(), rtts.end());
  const std::size_t n = replicas();
  const std::size_t acks = (n + 2) / 2 - 1;  // ceil((n+1)/2) - 1
  quorum_delay_ = acks == 0 ? 0 : rtts.at(acks - 1);
}

void ReplicatedLog::Replicate(Timestamp ts, LogEntryKind kind, TxnId txn,
                              CommitCallback on_commit) {
  if (!entries_.empty() && ts <= max_assigned_ts_) {
    throw std::logic_error("log entry timestamp " + ts.ToString() +
                           " not above last assigned " + max_assigned_ts_.ToString());
  }
  entries_.push_back(LogEntry{ts, kind, txn});
  max_assigned_ts_ = ts;
  const std::size_t index = entries_.size() - 1;
  const Micros commit_at = std::max(sim_.now() + quorum_delay_, last_commit_time_);
  last_commit_time_ = commit_at;
  sim_.ScheduleAt(commit_at, [this, index, cb = std::move(on_commit)]() { OnCommitted(index, cb); });
}

void ReplicatedLog::OnCommitted(std::size_t index, const CommitCallback& cb) {
  assert(index == committed_prefix_);
  committed_prefix_ = index + 1;
  max_write_ts_ = std::max(max_write_ts_, entries_[index].ts);
  if (cb) cb(sim_.now());
  if (safe_time_waiters_.empty()) return;
  std::vector<std::function<void()>> ready;
  auto it = std::remove_if(safe_time_waiters_.begin(), safe_time_waiters_.end(),
                           [&](auto& w) {
                             if (w.first <= max_write_ts_) {
                               ready.push_back(std::move(w.second));
                               return true;
                             }
                             return false;
                           });
  safe_time_waiters_.erase(it, safe_time_waiters_.end());
  for (auto& fn : ready) fn();
}

void ReplicatedLog::SafeTimeWait(Timestamp t_read, std::function<void()> ready) {
  if (leader_lease_) {
    if (max_assigned_ts_ < t_read) {
      Replicate(t_read.Successor(), LogEntryKind::kNoop, 0, nullptr);
    }
    ready();
    return;
  }
  if (t_read <= max_write_ts_) {
    ready();
    return;
  }
  safe_time_waiters_.emplace_back(t_read, std::move(ready));
}

void ReplicatedLog::DescribeBlocked(const std::string& who, std::vector<std::string>& out) const {
  for (const auto& w : safe_time_waiters_) {
    out.push_back(who + ": read waiting for safe time >= " + w.first.ToString() +
                  " (max write ts " + max_write_ts_.ToString() + ")");
  }
}

}  // namespace rsskv
