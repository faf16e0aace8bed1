#ifndef RSSKV_HISTORY_H_
#define RSSKV_HISTORY_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rsskv/types.h"

namespace rsskv {

using ProcessId = std::uint64_t;

enum class EventKind { kInvoke, kRespond, kSend, kRecv };
enum class TxnType { kReadOnly, kReadWrite, kFence };

struct WriteRecord {
  std::string key;
  std::uint32_t counter = 0;
  friend bool operator==(const WriteRecord&, const WriteRecord&) = default;
};

// A read observed the value written by `writer` (kInitialWriter for the
// initial value).
struct ReadRecord {
  std::string key;
  TxnId writer = kInitialWriter;
  friend bool operator==(const ReadRecord&, const ReadRecord&) = default;
};

// One line of a history file. Invokes of read-write transactions carry the
// intended writes; responses carry the observed reads and the status.
// Send/recv events link two processes through an application message and
// only use `process`, `time` and `message`.
struct HistoryEvent {
  EventKind kind = EventKind::kInvoke;
  TxnId txn = 0;
  ProcessId process = 0;
  std::string service;
  TxnType type = TxnType::kReadOnly;
  Micros time = 0;
  std::vector<WriteRecord> writes;
  std::vector<ReadRecord> reads;
  bool aborted = false;
  std::uint64_t message = 0;
  std::optional<Timestamp> t_read, t_min, t_snap, t_c;

  friend bool operator==(const HistoryEvent&, const HistoryEvent&) = default;
};

const char* TxnTypeName(TxnType type);

// JSON Lines serialization. Parse errors throw std::runtime_error naming
// the offending line.
std::string FormatEvent(const HistoryEvent& event);
HistoryEvent ParseEvent(const std::string& line);
void WriteHistory(std::ostream& out, const std::vector<HistoryEvent>& events);
std::vector<HistoryEvent> ReadHistory(std::istream& in);
std::vector<HistoryEvent> LoadHistoryFile(const std::string& path);
void SaveHistoryFile(const std::string& path, const std::vector<HistoryEvent>& events);

// In-memory sink for the events a run produces.
class HistoryRecorder {
 public:
  void Record(HistoryEvent event) { events_.push_back(std::move(event)); }
  const std::vector<HistoryEvent>& events() const { return events_; }
  void Clear() { events_.clear(); }

 private:
  std::vector<HistoryEvent> events_;
};

}  // namespace rsskv

#endif  // RSSKV_HISTORY_H_
