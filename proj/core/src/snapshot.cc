#include "rsskv/snapshot.h"

#include <stdexcept>
#include <unordered_map>

namespace rsskv {

Timestamp CalculateSnapshotTs(const std::vector<Key>& keys, const std::vector<Version>& versions) {
  std::unordered_map<Key, Timestamp> min_tc;
  for (const auto& v : versions) {
    auto [it, inserted] = min_tc.emplace(v.key, v.t_c);
    if (!inserted && v.t_c < it->second) it->second = v.t_c;
  }
  Timestamp t_snap = Timestamp::Zero();
  for (Key k : keys) {
    auto it = min_tc.find(k);
    if (it == min_tc.end()) {
      throw std::logic_error("no version returned for key " + std::to_string(k));
    }
    t_snap = std::max(t_snap, it->second);
  }
  return t_snap;
}

SnapshotCheck CheckSnapshot(const PendingPrepared& pending, Timestamp t_snap) {
  for (const auto& [txn, t_p] : pending) {
    if (t_p <= t_snap) return SnapshotCheck::kWait;
  }
  return SnapshotCheck::kCommit;
}

bool UpdatePrepared(PendingPrepared& pending, std::vector<Version>& versions, TxnId txn,
                    Outcome outcome, Timestamp t_c, const std::vector<Version>& written,
                    Timestamp t_snap) {
  if (pending.erase(txn) == 0) return false;
  if (outcome == Outcome::kCommit && t_c <= t_snap) {
    versions.insert(versions.end(), written.begin(), written.end());
  }
  return true;
}

std::map<Key, Version> ReadAtTimestamp(const std::vector<Key>& keys,
                                       const std::vector<Version>& versions, Timestamp t_snap) {
  std::map<Key, Version> out;
  for (Key k : keys) out[k] = Version{Timestamp::Zero(), k, Value{}};
  for (const auto& v : versions) {
    auto it = out.find(v.key);
    if (it == out.end() || v.t_c > t_snap) continue;
    if (v.t_c >= it->second.t_c) it->second = v;
  }
  return out;
}

}  // namespace rsskv
