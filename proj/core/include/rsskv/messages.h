#ifndef RSSKV_MESSAGES_H_
#define RSSKV_MESSAGES_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rsskv/simulator.h"
#include "rsskv/types.h"

namespace rsskv {

// Client -> shard leader: acquire read locks on `keys` and return their
// latest committed values.
struct ReadRequest {
  TxnId txn = 0;
  Timestamp age;  // wound-wait age (start of the first attempt)
  std::vector<Key> keys;
};

struct ReadReply {
  TxnId txn = 0;
  std::vector<KeyValue> values;
};

// Shard -> client: the transaction lost a lock to an older one while
// executing.
struct Wounded {
  TxnId txn = 0;
};

// Client -> shard: abandon an executing transaction.
struct AbortTxn {
  TxnId txn = 0;
};

// Client -> every participant.
struct Prepare {
  TxnId txn = 0;
  Timestamp age;
  Timestamp start;
  std::vector<KeyValue> writes;  // only keys on the receiving shard
  std::vector<Key> reads;        // only keys on the receiving shard
  Timestamp t_ee;
  NodeId client = kNoNode;
  ShardId coordinator = 0;
  std::vector<ShardId> participants;
};

// Participant -> coordinator.
struct PrepareOk {
  TxnId txn = 0;
  ShardId shard = 0;
  Timestamp t_p;
  Timestamp t_ee;  // after the blocked-time adjustment
};

struct PrepareFail {
  TxnId txn = 0;
  ShardId shard = 0;
};

// Participant -> coordinator: an older transaction wants a lock this
// prepared transaction holds.
struct WoundRequest {
  TxnId txn = 0;
  ShardId shard = 0;
};

// Coordinator -> participants.
struct Decide {
  TxnId txn = 0;
  Outcome outcome = Outcome::kAbort;
  Timestamp t_c;
};

// Coordinator -> client.
struct CommitReply {
  TxnId txn = 0;
  Outcome outcome = Outcome::kAbort;
  Timestamp t_c;
  Timestamp t_ee_max;
  Timestamp t_ee_min;
};

struct ROCommit {
  TxnId ro = 0;
  std::vector<Key> keys;
  Timestamp t_read;
  Timestamp t_min;
};

struct SkippedTxn {
  TxnId txn = 0;
  Timestamp t_p;
  std::vector<KeyValue> writes;  // restricted to the RO's keys; empty unless enabled
};

struct ROFastReply {
  TxnId ro = 0;
  ShardId shard = 0;
  std::vector<SkippedTxn> skipped;
  std::vector<Version> versions;
};

struct ROSlowReply {
  TxnId ro = 0;
  TxnId txn = 0;
  Outcome outcome = Outcome::kAbort;
  Timestamp t_c;
  std::vector<Version> versions;
};

// Application-level message between client processes.
struct AppSignal {
  std::string payload;
};

using Message = std::variant<ReadRequest, ReadReply, Wounded, AbortTxn, Prepare, PrepareOk,
                             PrepareFail, WoundRequest, Decide, CommitReply, ROCommit,
                             ROFastReply, ROSlowReply, AppSignal>;

std::string_view MessageName(const Message& msg);

// True for message types that only read-only transactions use.
bool IsReadOnlyMessage(std::string_view name);

}  // namespace rsskv

#endif  // RSSKV_MESSAGES_H_
