#include "rsskv/lock_table.h"

#include <algorithm>

namespace rsskv {

namespace {
bool Conflicts(LockMode a, LockMode b) { return a == LockMode::kWrite || b == LockMode::kWrite; }
}  // namespace

bool LockTable::Compatible(const KeyState& ks, TxnId txn, LockMode mode) const {
  if (ks.writer && *ks.writer != txn) return false;
  if (mode == LockMode::kRead) return true;
  return std::all_of(ks.readers.begin(), ks.readers.end(),
                     [txn](TxnId r) { return r == txn; });
}

void LockTable::Grant(KeyState& ks, Key key, TxnId txn, LockMode mode) {
  if (mode == LockMode::kWrite) {
    ks.writer = txn;
    ks.readers.erase(txn);
  } else if (!ks.writer || *ks.writer != txn) {
    ks.readers.insert(txn);
  }
  held_[txn].insert(key);
}

void LockTable::CollectWounds(const KeyState& ks, const LockAge& requester, LockMode mode,
                              Deferred& deferred) const {
  auto consider = [&](TxnId holder) {
    if (holder == requester.txn) return;
    auto it = ages_.find(holder);
    if (it != ages_.end() && requester < it->second) deferred.wounds.push_back(holder);
  };
  if (ks.writer) consider(*ks.writer);
  if (mode == LockMode::kWrite) {
    for (TxnId r : ks.readers) consider(r);
  }
}

bool LockTable::Acquire(LockAge age, Key key, LockMode mode, GrantFn granted) {
  const TxnId txn = age.txn;
  auto [age_it, inserted] = ages_.emplace(txn, age);
  if (!inserted) age = age_it->second;
  KeyState& ks = keys_[key];
  const bool older_waiter_conflicts =
      std::any_of(ks.queue.begin(), ks.queue.end(), [&](const Request& q) {
        return q.age < age && Conflicts(q.mode, mode);
      });
  if (Compatible(ks, txn, mode) && !older_waiter_conflicts) {
    Grant(ks, key, txn, mode);
    return true;
  }
  ks.queue.push_back(Request{age, mode, std::move(granted)});
  waiting_[txn].insert(key);
  Deferred deferred;
  CollectWounds(ks, age, mode, deferred);
  RunDeferred(deferred);
  return false;
}

void LockTable::Reevaluate(Key key, Deferred& deferred) {
  auto it = keys_.find(key);
  if (it == keys_.end()) return;
  KeyState& ks = it->second;
  std::stable_sort(ks.queue.begin(), ks.queue.end(),
                   [](const Request& a, const Request& b) { return a.age < b.age; });
  std::vector<Request> still_waiting;
  for (auto& req : ks.queue) {
    const bool blocked_by_older =
        std::any_of(still_waiting.begin(), still_waiting.end(),
                    [&](const Request& w) { return Conflicts(w.mode, req.mode); });
    if (!blocked_by_older && Compatible(ks, req.age.txn, req.mode)) {
      Grant(ks, key, req.age.txn, req.mode);
      auto w = waiting_.find(req.age.txn);
      if (w != waiting_.end()) {
        w->second.erase(key);
        if (w->second.empty()) waiting_.erase(w);
      }
      deferred.grants.push_back(std::move(req.granted));
    } else {
      CollectWounds(ks, req.age, req.mode, deferred);
      still_waiting.push_back(std::move(req));
    }
  }
  ks.queue = std::move(still_waiting);
  if (ks.queue.empty() && ks.readers.empty() && !ks.writer) keys_.erase(it);
}

void LockTable::ReleaseAll(TxnId txn) {
  std::set<Key> touched;
  if (auto h = held_.find(txn); h != held_.end()) {
    for (Key key : h->second) {
      auto it = keys_.find(key);
      if (it == keys_.end()) continue;
      it->second.readers.erase(txn);
      if (it->second.writer == txn) it->second.writer.reset();
      touched.insert(key);
    }
    held_.erase(h);
  }
  if (auto w = waiting_.find(txn); w != waiting_.end()) {
    for (Key key : w->second) {
      auto it = keys_.find(key);
      if (it == keys_.end()) continue;
      auto& q = it->second.queue;
      q.erase(std::remove_if(q.begin(), q.end(),
                             [txn](const Request& r) { return r.age.txn == txn; }),
              q.end());
      touched.insert(key);
    }
    waiting_.erase(w);
  }
  ages_.erase(txn);
  Deferred deferred;
  for (Key key : touched) Reevaluate(key, deferred);
  RunDeferred(deferred);
}

void LockTable::RunDeferred(Deferred& deferred) {
  for (auto& g : deferred.grants) {
    if (g) g();
  }
  std::sort(deferred.wounds.begin(), deferred.wounds.end());
  deferred.wounds.erase(std::unique(deferred.wounds.begin(), deferred.wounds.end()),
                        deferred.wounds.end());
  for (TxnId victim : deferred.wounds) {
    if (wound_) wound_(victim);
  }
}

bool LockTable::HoldsRead(TxnId txn, Key key) const {
  auto it = keys_.find(key);
  if (it == keys_.end()) return false;
  return it->second.readers.contains(txn) || it->second.writer == txn;
}

bool LockTable::HoldsWrite(TxnId txn, Key key) const {
  auto it = keys_.find(key);
  return it != keys_.end() && it->second.writer == txn;
}

bool LockTable::IsWaiting(TxnId txn) const { return waiting_.contains(txn); }

std::vector<TxnId> LockTable::Holders(Key key) const {
  std::vector<TxnId> out;
  auto it = keys_.find(key);
  if (it == keys_.end()) return out;
  if (it->second.writer) out.push_back(*it->second.writer);
  out.insert(out.end(), it->second.readers.begin(), it->second.readers.end());
  return out;
}

std::optional<LockAge> LockTable::AgeOf(TxnId txn) const {
  auto it = ages_.find(txn);
  if (it == ages_.end()) return std::nullopt;
  return it->second;
}

void LockTable::DescribeBlocked(const std::string& who, std::vector<std::string>& out) const {
  for (const auto& [key, ks] : keys_) {
    for (const auto& req : ks.queue) {
      std::string holders;
      for (TxnId h : Holders(key)) holders += " " + std::to_string(h);
      out.push_back(who + ": txn " + std::to_string(req.age.txn) + " waits for " +
                    (req.mode == LockMode::kWrite ? "write" : "read") + " lock on key " +
                    std::to_string(key) + " held by" + holders);
    }
  }
}

}  // namespace rsskv
