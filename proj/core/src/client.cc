#include "rsskv/client.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rsskv {

namespace {

std::vector<Key> Dedupe(std::vector<Key> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

}  // namespace

KvClient::KvClient(Deployment& deployment, KvService& service, ProcessId process,
                   RegionId region)
    : deployment_(deployment),
      service_(service),
      process_(process),
      region_(region),
      node_(deployment.net().AddNode(
          region, [this](NodeId from, const Message& msg) { Handle(from, msg); })) {}

KvClient::~KvClient() { deployment_.net().RemoveNode(node_); }

void KvClient::Send(ShardId shard, Message msg) {
  deployment_.net().Send(node_, service_.shard_node(shard), std::move(msg));
}

void KvClient::Handle(NodeId from, const Message& msg) {
  if (auto* m = std::get_if<ReadReply>(&msg)) {
    OnReadReply(*m);
  } else if (auto* m = std::get_if<Wounded>(&msg)) {
    OnWounded(*m);
  } else if (auto* m = std::get_if<CommitReply>(&msg)) {
    OnCommitReply(*m);
  } else if (auto* m = std::get_if<ROFastReply>(&msg)) {
    OnFastReply(*m);
  } else if (auto* m = std::get_if<ROSlowReply>(&msg)) {
    OnSlowReply(*m);
  } else if (auto* m = std::get_if<AppSignal>(&msg)) {
    if (signal_handler_) signal_handler_(from, *m);
  } else {
    throw std::logic_error("client got unexpected " + std::string(MessageName(msg)));
  }
}

void KvClient::ReadWrite(std::vector<Key> reads, std::vector<Key> writes, RwCallback done) {
  if (busy()) throw std::logic_error("client already has an outstanding transaction");
  rw_ = std::make_unique<RwOp>();
  rw_->reads = Dedupe(std::move(reads));
  rw_->writes = Dedupe(std::move(writes));
  if (rw_->writes.empty() && rw_->reads.empty()) throw std::invalid_argument("empty transaction");
  rw_->done = std::move(done);
  StartAttempt();
}

void KvClient::StartAttempt() {
  RwOp& op = *rw_;
  op.txn = deployment_.NextTxnId();
  op.start = Timestamp::At(TTNow().latest);
  op.invoke = Now();
  if (op.attempts == 0) {
    op.age = op.start;
    op.first_invoke = op.invoke;
  }
  ++op.attempts;
  op.committing = false;
  op.read_values.clear();

  HistoryEvent ev;
  ev.kind = EventKind::kInvoke;
  ev.txn = op.txn;
  ev.process = process_;
  ev.service = service_.name();
  ev.type = TxnType::kReadWrite;
  ev.time = op.invoke;
  for (std::size_t i = 0; i < op.writes.size(); ++i) {
    ev.writes.push_back(
        WriteRecord{HistoryKey(service_.name(), op.writes[i]), static_cast<std::uint32_t>(i)});
  }
  ev.t_min = t_min_;
  deployment_.Record(std::move(ev));

  std::map<ShardId, std::vector<Key>> by_shard;
  for (Key k : op.reads) by_shard[service_.ShardOf(k)].push_back(k);
  op.read_shards.clear();
  op.reads_pending = by_shard.size();
  if (by_shard.empty()) {
    SendPrepares();
    return;
  }
  for (auto& [shard, keys] : by_shard) {
    op.read_shards.push_back(shard);
    Send(shard, ReadRequest{op.txn, op.age, std::move(keys)});
  }
}

void KvClient::OnReadReply(const ReadReply& m) {
  if (!rw_ || rw_->txn != m.txn || rw_->committing) return;
  for (const auto& kv : m.values) rw_->read_values[kv.key] = kv.value;
  if (--rw_->reads_pending == 0) SendPrepares();
}

void KvClient::OnWounded(const Wounded& m) {
  if (!rw_ || rw_->txn != m.txn || rw_->committing) return;
  for (ShardId s : rw_->read_shards) Send(s, AbortTxn{m.txn});
  FinishAttempt(false, Timestamp::Zero());
}

void KvClient::SendPrepares() {
  RwOp& op = *rw_;
  op.committing = true;
  std::set<ShardId> participant_set;
  for (Key k : op.reads) participant_set.insert(service_.ShardOf(k));
  for (Key k : op.writes) participant_set.insert(service_.ShardOf(k));
  const std::vector<ShardId> participants(participant_set.begin(), participant_set.end());
  const CoordinatorChoice choice = service_.planner().Choose(region_, participants);
  const Timestamp t_ee = Timestamp::At(TTNow().earliest + choice.estimate);
  for (ShardId p : participants) {
    Prepare prepare;
    prepare.txn = op.txn;
    prepare.age = op.age;
    prepare.start = op.start;
    prepare.t_ee = t_ee;
    prepare.client = node_;
    prepare.coordinator = choice.coordinator;
    prepare.participants = participants;
    for (std::size_t i = 0; i < op.writes.size(); ++i) {
      if (service_.ShardOf(op.writes[i]) != p) continue;
      prepare.writes.push_back(
          KeyValue{op.writes[i], Value{op.txn, static_cast<std::uint32_t>(i)}});
    }
    for (Key k : op.reads) {
      if (service_.ShardOf(k) == p) prepare.reads.push_back(k);
    }
    Send(p, std::move(prepare));
  }
}

void KvClient::OnCommitReply(const CommitReply& m) {
  if (!rw_ || rw_->txn != m.txn || !rw_->committing) return;
  if (m.outcome == Outcome::kAbort) {
    FinishAttempt(false, Timestamp::Zero());
    return;
  }
  const TrueTime& tt = deployment_.truetime();
  const Micros release =
      std::max(tt.CommitWaitRelease(m.t_c, Now()), tt.EarliestAfter(m.t_ee_max, Now()));
  const Micros bound = service_.fence_bound();
  if (m.t_c > m.t_ee_min.Plus(bound)) {
    deployment_.bound_violations().push_back(
        "txn " + std::to_string(m.txn) + ": t_c " + m.t_c.ToString() + " exceeds t_ee " +
        m.t_ee_min.ToString() + " by more than L=" + std::to_string(bound) + "us");
  }
  deployment_.sim().ScheduleAt(
      release,
      [this, txn = m.txn, t_c = m.t_c, t_ee_min = m.t_ee_min]() {
        if (!rw_ || rw_->txn != txn) return;
        RwAuditRecord rec;
        rec.service = service_.name();
        rec.txn = txn;
        rec.invoke = rw_->invoke;
        rec.respond = Now();
        rec.t_c = t_c;
        rec.t_ee_min = t_ee_min;
        rec.reads = rw_->reads;
        rec.writes = rw_->writes;
        deployment_.audit().rw.push_back(std::move(rec));
        FinishAttempt(true, t_c);
      },
      node_);
}

void KvClient::FinishAttempt(bool committed, Timestamp t_c) {
  RwOp& op = *rw_;
  HistoryEvent ev;
  ev.kind = EventKind::kRespond;
  ev.txn = op.txn;
  ev.process = process_;
  ev.service = service_.name();
  ev.type = TxnType::kReadWrite;
  ev.time = Now();
  ev.aborted = !committed;
  if (committed) {
    for (const auto& [k, v] : op.read_values) {
      ev.reads.push_back(ReadRecord{HistoryKey(service_.name(), k), v.writer});
    }
    ev.t_c = t_c;
  }
  deployment_.Record(std::move(ev));

  if (!committed && op.attempts <= service_.config().max_retries) {
    StartAttempt();
    return;
  }
  if (committed) t_min_ = std::max(t_min_, t_c);
  RwResult result;
  result.committed = committed;
  result.txn = op.txn;
  result.t_c = t_c;
  result.attempts = op.attempts;
  result.latency = Now() - op.first_invoke;
  if (committed) result.reads = op.read_values;
  RwCallback done = std::move(op.done);
  rw_.reset();
  done(result);
}

void KvClient::ReadOnly(std::vector<Key> keys, RoCallback done) {
  if (busy()) throw std::logic_error("client already has an outstanding transaction");
  keys = Dedupe(std::move(keys));
  if (keys.empty()) throw std::invalid_argument("empty read-only transaction");
  ro_ = std::make_unique<RoOp>();
  RoOp& op = *ro_;
  op.txn = deployment_.NextTxnId();
  op.keys = std::move(keys);
  op.done = std::move(done);
  op.t_read = Timestamp::At(TTNow().latest);
  op.invoke = Now();

  HistoryEvent ev;
  ev.kind = EventKind::kInvoke;
  ev.txn = op.txn;
  ev.process = process_;
  ev.service = service_.name();
  ev.type = TxnType::kReadOnly;
  ev.time = op.invoke;
  ev.t_read = op.t_read;
  ev.t_min = t_min_;
  deployment_.Record(std::move(ev));

  std::map<ShardId, std::vector<Key>> by_shard;
  for (Key k : op.keys) by_shard[service_.ShardOf(k)].push_back(k);
  op.fast_pending = by_shard.size();
  for (auto& [shard, ks] : by_shard) {
    Send(shard, ROCommit{op.txn, std::move(ks), op.t_read, t_min_});
  }
}

void KvClient::OnFastReply(const ROFastReply& m) {
  if (!ro_ || ro_->txn != m.ro || ro_->t_snap) return;
  RoOp& op = *ro_;
  op.versions.insert(op.versions.end(), m.versions.begin(), m.versions.end());
  for (const auto& s : m.skipped) {
    op.pending[s.txn] = s.t_p;
    if (!s.writes.empty()) {
      auto& w = op.skipped_writes[s.txn];
      w.insert(w.end(), s.writes.begin(), s.writes.end());
    }
  }
  if (--op.fast_pending == 0) ComputeSnapshot();
}

void KvClient::ComputeSnapshot() {
  RoOp& op = *ro_;
  // A skipped transaction whose write another shard already returned is
  // known to have committed at that version's t_c.
  for (const auto& [txn, writes] : op.skipped_writes) {
    if (!op.pending.contains(txn)) continue;
    auto it = std::find_if(op.versions.begin(), op.versions.end(),
                           [txn = txn](const Version& v) { return v.value.writer == txn; });
    if (it == op.versions.end()) continue;
    const Timestamp t_c = it->t_c;
    for (const auto& kv : writes) op.versions.push_back(Version{t_c, kv.key, kv.value});
    op.pending.erase(txn);
  }
  op.t_snap = CalculateSnapshotTs(op.keys, op.versions);
  for (const auto& s : op.early_slow) {
    UpdatePrepared(op.pending, op.versions, s.txn, s.outcome, s.t_c, s.versions, *op.t_snap);
  }
  op.early_slow.clear();
  MaybeFinishRo();
}

void KvClient::OnSlowReply(const ROSlowReply& m) {
  if (!ro_ || ro_->txn != m.ro) return;
  RoOp& op = *ro_;
  if (!op.t_snap) {
    op.early_slow.push_back(m);
    return;
  }
  UpdatePrepared(op.pending, op.versions, m.txn, m.outcome, m.t_c, m.versions, *op.t_snap);
  MaybeFinishRo();
}

void KvClient::MaybeFinishRo() {
  RoOp& op = *ro_;
  if (CheckSnapshot(op.pending, *op.t_snap) == SnapshotCheck::kWait) {
    op.waited = true;
    return;
  }
  t_min_ = std::max(t_min_, *op.t_snap);
  RoResult result;
  result.txn = op.txn;
  result.t_read = op.t_read;
  result.t_snap = *op.t_snap;
  result.latency = Now() - op.invoke;
  result.values = ReadAtTimestamp(op.keys, op.versions, *op.t_snap);
  result.waited_for_slow_reply = op.waited;

  HistoryEvent ev;
  ev.kind = EventKind::kRespond;
  ev.txn = op.txn;
  ev.process = process_;
  ev.service = service_.name();
  ev.type = TxnType::kReadOnly;
  ev.time = Now();
  for (const auto& [k, v] : result.values) {
    ev.reads.push_back(ReadRecord{HistoryKey(service_.name(), k), v.value.writer});
  }
  ev.t_read = op.t_read;
  ev.t_snap = op.t_snap;
  ev.t_min = t_min_;
  deployment_.Record(std::move(ev));

  RoAuditRecord rec;
  rec.service = service_.name();
  rec.txn = op.txn;
  rec.t_read = op.t_read;
  rec.t_snap = *op.t_snap;
  rec.values = result.values;
  deployment_.audit().ro.push_back(std::move(rec));

  RoCallback done = std::move(op.done);
  ro_.reset();
  done(result);
}

void KvClient::Fence(std::function<void()> done) {
  if (busy()) throw std::logic_error("client already has an outstanding transaction");
  fencing_ = true;
  const TxnId txn = deployment_.NextTxnId();
  HistoryEvent ev;
  ev.kind = EventKind::kInvoke;
  ev.txn = txn;
  ev.process = process_;
  ev.service = service_.name();
  ev.type = TxnType::kFence;
  ev.time = Now();
  ev.t_min = t_min_;
  deployment_.Record(ev);
  const Micros release =
      deployment_.truetime().EarliestAfter(t_min_.Plus(service_.fence_bound()), Now());
  deployment_.sim().ScheduleAt(
      release,
      [this, ev, done = std::move(done)]() mutable {
        fencing_ = false;
        ev.kind = EventKind::kRespond;
        ev.time = Now();
        deployment_.Record(std::move(ev));
        done();
      },
      node_);
}

}  // namespace rsskv
