#ifndef RSSKV_TYPES_H_
#define RSSKV_TYPES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rsskv/timestamp.h"

namespace rsskv {

using Key = std::uint64_t;
using TxnId = std::uint64_t;
using ShardId = std::uint32_t;

// Writer id of the distinguished initial version every key starts with.
constexpr TxnId kInitialWriter = 0;

// A written value carries its provenance: the writing transaction and the
// position of the write inside that transaction's write set. Reads-from is
// resolved from the writer id, never by comparing payloads.
struct Value {
  TxnId writer = kInitialWriter;
  std::uint32_t counter = 0;

  friend bool operator==(const Value&, const Value&) = default;
};

struct KeyValue {
  Key key = 0;
  Value value;
};

// One committed (t_c, key, value) triple.
struct Version {
  Timestamp t_c;
  Key key = 0;
  Value value;
};

enum class Outcome { kCommit, kAbort };

enum class ConsistencyMode { kStrictSerializable, kRss };

const char* ModeName(ConsistencyMode mode);
ConsistencyMode ParseMode(const std::string& name);

}  // namespace rsskv

#endif  // RSSKV_TYPES_H_
