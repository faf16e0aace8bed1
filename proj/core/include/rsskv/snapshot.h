#ifndef RSSKV_SNAPSHOT_H_
#define RSSKV_SNAPSHOT_H_

#include <map>
#include <vector>

#include "rsskv/types.h"

namespace rsskv {

// Skipped prepared transactions an RO still has to hear about: txn -> t_p.
using PendingPrepared = std::map<TxnId, Timestamp>;

// max over keys of the smallest t_c returned for that key. Throws if a key
// has no version in `versions`.
Timestamp CalculateSnapshotTs(const std::vector<Key>& keys, const std::vector<Version>& versions);

enum class SnapshotCheck { kWait, kCommit };

// kWait iff some pending t_p <= t_snap.
SnapshotCheck CheckSnapshot(const PendingPrepared& pending, Timestamp t_snap);

// Applies a slow reply. A commit at or below t_snap contributes its
// versions; anything else only removes the transaction from `pending`.
// Returns false if `txn` was not pending.
bool UpdatePrepared(PendingPrepared& pending, std::vector<Version>& versions, TxnId txn,
                    Outcome outcome, Timestamp t_c, const std::vector<Version>& written,
                    Timestamp t_snap);

// Per key, the version with the greatest t_c <= t_snap (the initial version
// if none).
std::map<Key, Version> ReadAtTimestamp(const std::vector<Key>& keys,
                                       const std::vector<Version>& versions, Timestamp t_snap);

}  // namespace rsskv

#endif  // RSSKV_SNAPSHOT_H_
