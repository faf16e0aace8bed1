#include "rsskv/shard.h"

#include <algorithm>
#include <stdexcept>

namespace rsskv {

Shard::Shard(ShardId id, Simulator& sim, MessageNetwork& net, const TrueTime& tt,
             RegionId region, std::vector<RegionId> followers, bool leader_lease,
             ShardOptions options)
    : id_(id),
      sim_(sim),
      net_(net),
      tt_(tt),
      region_(region),
      options_(options),
      node_(net.AddNode(region, [this](NodeId from, const Message& msg) { Handle(from, msg); })),
      log_(sim, region, std::move(followers), net.matrix(), leader_lease),
      locks_([this](TxnId victim) { OnWound(victim); }) {}

void Shard::Handle(NodeId from, const Message& msg) {
  if (auto* m = std::get_if<ReadRequest>(&msg)) {
    OnReadRequest(from, *m);
  } else if (auto* m = std::get_if<AbortTxn>(&msg)) {
    OnAbortTxn(*m);
  } else if (auto* m = std::get_if<Prepare>(&msg)) {
    OnPrepare(*m);
  } else if (auto* m = std::get_if<PrepareOk>(&msg)) {
    OnPrepareOk(*m);
  } else if (auto* m = std::get_if<PrepareFail>(&msg)) {
    OnPrepareFail(*m);
  } else if (auto* m = std::get_if<WoundRequest>(&msg)) {
    OnWoundRequest(*m);
  } else if (auto* m = std::get_if<Decide>(&msg)) {
    OnDecide(*m);
  } else if (auto* m = std::get_if<ROCommit>(&msg)) {
    OnROCommit(from, *m);
  } else {
    throw std::logic_error("shard " + std::to_string(id_) + " got unexpected " +
                           std::string(MessageName(msg)));
  }
}

Timestamp Shard::NextTimestamp() {
  const Timestamp floor = std::max(max_ts_, log_.max_assigned_ts());
  max_ts_ = StrictlyAbove(floor, tt_.Now(sim_.now()).latest);
  return max_ts_;
}

void Shard::AcquireAll(TxnId txn, const LockAge& age, const std::vector<Key>& keys,
                       LockMode mode, std::function<void()> done) {
  auto remaining = std::make_shared<std::size_t>(keys.size() + 1);
  auto step = [remaining, done = std::move(done)]() {
    if (--*remaining == 0) done();
  };
  for (Key key : keys) {
    if (!txns_.contains(txn)) return;
    if (locks_.Acquire(age, key, mode, step)) step();
  }
  if (txns_.contains(txn)) step();
}

void Shard::OnReadRequest(NodeId from, const ReadRequest& m) {
  if (aborted_.contains(m.txn) || decided_.contains(m.txn)) {
    Send(from, Wounded{m.txn});
    return;
  }
  TxnState& st = txns_[m.txn];
  st.age = LockAge{m.age, m.txn};
  st.client = from;
  AcquireAll(m.txn, st.age, m.keys, LockMode::kRead, [this, txn = m.txn, keys = m.keys, from]() {
    auto it = txns_.find(txn);
    if (it == txns_.end() || it->second.phase != Phase::kExecuting) return;
    ReadReply reply{txn, {}};
    for (Key k : keys) reply.values.push_back(KeyValue{k, store_.Latest(k).value});
    Send(from, std::move(reply));
  });
}

void Shard::OnAbortTxn(const AbortTxn& m) {
  auto it = txns_.find(m.txn);
  if (it == txns_.end()) {
    aborted_.insert(m.txn);
    return;
  }
  if (it->second.phase == Phase::kExecuting) AbortLocal(m.txn);
}

void Shard::AbortLocal(TxnId txn) {
  txns_.erase(txn);
  aborted_.insert(txn);
  RemovePrepared(txn, Outcome::kAbort, Timestamp::Zero());
  locks_.ReleaseAll(txn);
}

void Shard::PrepareFailedLocally(const Prepare& prepare) {
  if (prepare.coordinator == id_) {
    Coord(prepare.txn).prepare = prepare;
    CoordinatorAbort(prepare.txn);
  } else {
    Send(peers_.at(prepare.coordinator), PrepareFail{prepare.txn, id_});
  }
}

void Shard::OnWound(TxnId victim) {
  auto it = txns_.find(victim);
  if (it == txns_.end()) return;
  TxnState& st = it->second;
  switch (st.phase) {
    case Phase::kExecuting: {
      const NodeId client = st.client;
      AbortLocal(victim);
      Send(client, Wounded{victim});
      break;
    }
    case Phase::kPreparing: {
      const Prepare prepare = *st.prepare;
      AbortLocal(victim);
      PrepareFailedLocally(prepare);
      break;
    }
    case Phase::kPrepared: {
      const ShardId coordinator = st.prepare->coordinator;
      if (coordinator == id_) {
        CoordinatorAbort(victim);
      } else if (!st.wound_requested) {
        st.wound_requested = true;
        Send(peers_.at(coordinator), WoundRequest{victim, id_});
      }
      break;
    }
    case Phase::kCommitting:
      break;
  }
}

void Shard::OnPrepare(const Prepare& m) {
  if (decided_.contains(m.txn)) return;
  if (m.coordinator == id_) {
    CoordinatorState& c = Coord(m.txn);
    c.prepare = m;
    if (c.abort_requested) {
      CoordinatorAbort(m.txn);
      return;
    }
  }
  if (aborted_.contains(m.txn)) {
    PrepareFailedLocally(m);
    return;
  }
  TxnState& st = txns_[m.txn];
  st.age = LockAge{m.age, m.txn};
  st.client = m.client;
  st.phase = Phase::kPreparing;
  st.prepare = m;
  st.prepare_arrival = sim_.now();
  for (Key k : m.reads) {
    if (!locks_.HoldsRead(m.txn, k)) {
      AbortLocal(m.txn);
      PrepareFailedLocally(m);
      return;
    }
  }
  std::vector<Key> keys;
  keys.reserve(m.writes.size());
  for (const auto& kv : m.writes) keys.push_back(kv.key);
  AcquireAll(m.txn, st.age, keys, LockMode::kWrite, [this, txn = m.txn]() { FinishPrepare(txn); });
}

void Shard::FinishPrepare(TxnId txn) {
  auto it = txns_.find(txn);
  if (it == txns_.end() || it->second.phase != Phase::kPreparing) return;
  TxnState& st = it->second;
  st.phase = Phase::kPrepared;
  const Prepare& prepare = *st.prepare;
  const Timestamp t_p = NextTimestamp();
  Timestamp t_ee = prepare.t_ee;
  if (options_.adjust_t_ee_for_blocking) t_ee = t_ee.Plus(sim_.now() - st.prepare_arrival);
  prepared_[txn] = PreparedRecord{txn, t_p, t_ee, prepare.writes};
  if (prepare.coordinator == id_) {
    CoordinatorState& c = Coord(txn);
    c.ok.insert(id_);
    c.max_t_p = std::max(c.max_t_p, t_p);
    c.t_ee_max = std::max(c.t_ee_max, t_ee);
    c.t_ee_min = c.t_ee_min ? std::min(*c.t_ee_min, t_ee) : t_ee;
    MaybeDecide(txn);
    return;
  }
  const NodeId coordinator = peers_.at(prepare.coordinator);
  log_.Replicate(t_p, LogEntryKind::kPrepare, txn, [this, txn, t_p, t_ee, coordinator](Micros) {
    Send(coordinator, PrepareOk{txn, id_, t_p, t_ee});
  });
}

Shard::CoordinatorState& Shard::Coord(TxnId txn) { return coordinating_[txn]; }

void Shard::OnPrepareOk(const PrepareOk& m) {
  if (decided_.contains(m.txn)) return;
  CoordinatorState& c = Coord(m.txn);
  c.ok.insert(m.shard);
  c.max_t_p = std::max(c.max_t_p, m.t_p);
  c.t_ee_max = std::max(c.t_ee_max, m.t_ee);
  c.t_ee_min = c.t_ee_min ? std::min(*c.t_ee_min, m.t_ee) : m.t_ee;
  MaybeDecide(m.txn);
}

void Shard::OnPrepareFail(const PrepareFail& m) { CoordinatorAbort(m.txn); }

void Shard::OnWoundRequest(const WoundRequest& m) { CoordinatorAbort(m.txn); }

void Shard::MaybeDecide(TxnId txn) {
  if (decided_.contains(txn)) return;
  auto cit = coordinating_.find(txn);
  if (cit == coordinating_.end() || !cit->second.prepare) return;
  CoordinatorState& c = cit->second;
  if (c.abort_requested) {
    CoordinatorAbort(txn);
    return;
  }
  if (c.ok.size() != c.prepare->participants.size()) return;
  auto it = txns_.find(txn);
  if (it == txns_.end() || it->second.phase != Phase::kPrepared) return;
  it->second.phase = Phase::kCommitting;
  decided_.insert(txn);
  Timestamp t_c = std::max(c.max_t_p, c.prepare->start.Successor());
  t_c = std::max(t_c, NextTimestamp());
  max_ts_ = std::max(max_ts_, t_c);
  log_.Replicate(t_c, LogEntryKind::kCommit, txn, [this, txn, t_c](Micros) {
    auto node = coordinating_.extract(txn);
    const CoordinatorState& state = node.mapped();
    const Prepare& prepare = *state.prepare;
    ApplyCommit(txn, t_c);
    Send(prepare.client, CommitReply{txn, Outcome::kCommit, t_c, state.t_ee_max,
                                     state.t_ee_min.value_or(state.t_ee_max)});
    for (ShardId p : prepare.participants) {
      if (p != id_) Send(peers_.at(p), Decide{txn, Outcome::kCommit, t_c});
    }
  });
}

void Shard::CoordinatorAbort(TxnId txn) {
  if (decided_.contains(txn)) return;
  CoordinatorState& c = Coord(txn);
  if (!c.prepare) {
    c.abort_requested = true;
    return;
  }
  decided_.insert(txn);
  const Prepare prepare = *c.prepare;
  coordinating_.erase(txn);
  if (txns_.contains(txn)) {
    AbortLocal(txn);
  } else {
    aborted_.insert(txn);
  }
  Send(prepare.client, CommitReply{txn, Outcome::kAbort, Timestamp::Zero(), Timestamp::Zero(),
                                   Timestamp::Zero()});
  for (ShardId p : prepare.participants) {
    if (p != id_) Send(peers_.at(p), Decide{txn, Outcome::kAbort, Timestamp::Zero()});
  }
}

void Shard::OnDecide(const Decide& m) {
  if (decided_.contains(m.txn)) return;
  decided_.insert(m.txn);
  if (m.outcome == Outcome::kAbort) {
    if (txns_.contains(m.txn)) {
      AbortLocal(m.txn);
    } else {
      aborted_.insert(m.txn);
    }
    return;
  }
  auto it = txns_.find(m.txn);
  if (it == txns_.end() || it->second.phase != Phase::kPrepared) {
    throw std::logic_error("commit decision for txn " + std::to_string(m.txn) +
                           " not prepared at shard " + std::to_string(id_));
  }
  it->second.phase = Phase::kCommitting;
  max_ts_ = std::max(max_ts_, m.t_c);
  const Timestamp entry = NextTimestamp();
  log_.Replicate(entry, LogEntryKind::kCommit, m.txn,
                 [this, txn = m.txn, t_c = m.t_c](Micros) { ApplyCommit(txn, t_c); });
}

void Shard::ApplyCommit(TxnId txn, Timestamp t_c) {
  auto it = prepared_.find(txn);
  if (it == prepared_.end()) throw std::logic_error("applying unprepared txn");
  for (const auto& kv : it->second.writes) store_.Apply(t_c, kv.key, kv.value);
  max_ts_ = std::max(max_ts_, t_c);
  txns_.erase(txn);
  RemovePrepared(txn, Outcome::kCommit, t_c);
  locks_.ReleaseAll(txn);
  if (apply_observer_) apply_observer_(id_, txn, t_c);
}

void Shard::RemovePrepared(TxnId txn, Outcome outcome, Timestamp t_c) {
  auto it = prepared_.find(txn);
  if (it == prepared_.end()) return;
  const std::vector<KeyValue> writes = std::move(it->second.writes);
  prepared_.erase(it);
  if (auto sit = subscriptions_.find(txn); sit != subscriptions_.end()) {
    for (const auto& sub : sit->second) {
      ROSlowReply reply{sub.ro, txn, outcome, Timestamp::Zero(), {}};
      if (outcome == Outcome::kCommit) {
        reply.t_c = t_c;
        for (const auto& kv : writes) {
          if (std::find(sub.keys.begin(), sub.keys.end(), kv.key) != sub.keys.end()) {
            reply.versions.push_back(Version{t_c, kv.key, kv.value});
          }
        }
      }
      Send(sub.client, std::move(reply));
    }
    subscriptions_.erase(sit);
  }
  RecheckBlockedRos();
}

bool Shard::Conflicts(const PreparedRecord& p, const std::vector<Key>& keys) const {
  for (const auto& kv : p.writes) {
    if (std::find(keys.begin(), keys.end(), kv.key) != keys.end()) return true;
  }
  return false;
}

bool Shard::Blocks(const PreparedRecord& p, const ROCommit& ro) const {
  if (options_.mode == ConsistencyMode::kStrictSerializable) return true;
  return p.t_p <= ro.t_min || p.t_ee <= ro.t_read;
}

void Shard::OnROCommit(NodeId from, const ROCommit& m) {
  log_.SafeTimeWait(m.t_read, [this, from, m]() {
    if (!TryFinishRo(from, m)) blocked_ros_.push_back(BlockedRo{from, m});
  });
}

bool Shard::TryFinishRo(NodeId client, const ROCommit& ro) {
  for (const auto& [txn, p] : prepared_) {
    if (p.t_p <= ro.t_read && Conflicts(p, ro.keys) && Blocks(p, ro)) return false;
  }
  ROFastReply reply{ro.ro, id_, {}, {}};
  for (Key k : ro.keys) reply.versions.push_back(store_.ReadAt(k, ro.t_read));
  for (const auto& [txn, p] : prepared_) {
    if (p.t_p > ro.t_read || !Conflicts(p, ro.keys)) continue;
    SkippedTxn skipped{txn, p.t_p, {}};
    if (options_.skipped_writes_in_fast_reply) {
      for (const auto& kv : p.writes) {
        if (std::find(ro.keys.begin(), ro.keys.end(), kv.key) != ro.keys.end()) {
          skipped.writes.push_back(kv);
        }
      }
    }
    reply.skipped.push_back(std::move(skipped));
    subscriptions_[txn].push_back(Subscription{client, ro.ro, ro.keys});
  }
  Send(client, std::move(reply));
  return true;
}

void Shard::RecheckBlockedRos() {
  if (blocked_ros_.empty()) return;
  std::vector<BlockedRo> still;
  std::vector<BlockedRo> pending = std::move(blocked_ros_);
  blocked_ros_.clear();
  for (auto& b : pending) {
    if (!TryFinishRo(b.client, b.request)) still.push_back(std::move(b));
  }
  blocked_ros_ = std::move(still);
}

std::size_t Shard::subscription_count() const {
  std::size_t n = 0;
  for (const auto& [txn, subs] : subscriptions_) n += subs.size();
  return n;
}

void Shard::DescribeBlocked(std::vector<std::string>& out) const {
  const std::string who = "shard " + std::to_string(id_);
  locks_.DescribeBlocked(who, out);
  log_.DescribeBlocked(who, out);
  for (const auto& b : blocked_ros_) {
    std::string waiting;
    for (const auto& [txn, p] : prepared_) {
      if (p.t_p <= b.request.t_read && Conflicts(p, b.request.keys) && Blocks(p, b.request)) {
        waiting += " " + std::to_string(txn);
      }
    }
    out.push_back(who + ": ro " + std::to_string(b.request.ro) + " at t_read " +
                  b.request.t_read.ToString() + " waits for prepared txns" + waiting);
  }
  for (const auto& [txn, c] : coordinating_) {
    if (!c.prepare) continue;
    out.push_back(who + ": coordinating txn " + std::to_string(txn) + " with " +
                  std::to_string(c.ok.size()) + "/" +
                  std::to_string(c.prepare->participants.size()) + " prepared");
  }
}

}  // namespace rsskv
