#ifndef RSSKV_CHECKER_H_
#define RSSKV_CHECKER_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsskv/history.h"

namespace rsskv {

enum class Model { kRss, kStrictSerializable, kRsc };

const char* ModelName(Model model);
Model ParseModel(const std::string& name);

// A malformed or internally inconsistent history.
class HistoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// What the search orders: whole transactions, or single operations under
// RSC.
struct Unit {
  enum class Kind { kReader, kWriter, kFence };

  std::string label;
  TxnId txn = 0;
  ProcessId process = 0;
  std::string service;
  Kind kind = Kind::kReader;
  Micros invoke = 0;
  std::optional<Micros> respond;  // absent for an extended incomplete write
  std::vector<ReadRecord> reads;
  std::vector<std::string> writes;
};

struct AnalyzedHistory {
  std::vector<Unit> units;
  // causal[a][b]: a causally precedes b (transitively closed).
  std::vector<std::vector<char>> causal;
  // Reads of a unit that observe an aborted writer; such a history has no
  // legal serialization.
  std::vector<std::string> aborted_reads;

  std::size_t size() const { return units.size(); }
  bool RealTime(std::size_t a, std::size_t b) const;
  // b reads a key that a writes.
  bool Conflicts(std::size_t a, std::size_t b) const;
};

// Builds the units a model orders and the causal relation over them.
// Incomplete writers are kept only if some kept unit read from them;
// incomplete readers, incomplete fences and aborted transactions are
// dropped.
AnalyzedHistory Analyze(const std::vector<HistoryEvent>& events, Model model);

// Counts the units Analyze would produce, without building relations.
std::size_t CountUnits(const std::vector<HistoryEvent>& events, Model model);

// must[a][b]: the model requires a before b. Not transitively closed.
std::vector<std::vector<char>> RequiredOrder(const AnalyzedHistory& h, Model model);

// Every read returns the value of the latest preceding write (or the
// initial value).
bool ReplayLegal(const std::vector<Unit>& units, const std::vector<std::size_t>& order);

// Checks a witness against the model's order constraints and replays it.
// On failure returns a description.
std::optional<std::string> ValidateWitness(const AnalyzedHistory& h, Model model,
                                           const std::vector<std::size_t>& order);

enum class VerdictKind { kAccept, kReject, kUnknown };
const char* VerdictName(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::kUnknown;
  std::vector<std::string> witness;  // unit labels in serialization order
  std::string note;
  std::size_t units = 0;
  std::uint64_t states_explored = 0;
};

struct CheckOptions {
  std::size_t max_units = 12;
  double time_limit_seconds = 5.0;
};

// Searches for a serialization satisfying `model`. Histories with more
// units than the cap, or searches that run past the time limit, give
// kUnknown. Throws HistoryError for malformed histories.
Verdict Check(const std::vector<HistoryEvent>& events, Model model,
              const CheckOptions& options = {});

}  // namespace rsskv

#endif  // RSSKV_CHECKER_H_
