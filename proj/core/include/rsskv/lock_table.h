#ifndef RSSKV_LOCK_TABLE_H_
#define RSSKV_LOCK_TABLE_H_

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "rsskv/types.h"

namespace rsskv {

enum class LockMode { kRead, kWrite };

// Wound-wait age. Smaller is older; ties break on transaction id.
struct LockAge {
  Timestamp start;
  TxnId txn = 0;
  friend auto operator<=>(const LockAge&, const LockAge&) = default;
};

// Per-key shared/exclusive locks with wound-wait deadlock prevention: an
// older requester wounds younger conflicting holders and waits for them to
// release; a younger requester just waits.
//
// Grant and wound callbacks run only after the table's state is consistent,
// so they may re-enter the table.
class LockTable {
 public:
  using WoundFn = std::function<void(TxnId victim)>;
  using GrantFn = std::function<void()>;

  explicit LockTable(WoundFn wound) : wound_(std::move(wound)) {}

  // Returns true if granted now (`granted` is then dropped). Otherwise the
  // request queues and `granted` runs on grant, possibly before Acquire
  // returns if a wound frees the key synchronously.
  bool Acquire(LockAge age, Key key, LockMode mode, GrantFn granted);

  // Releases every lock `txn` holds and drops its queued requests.
  void ReleaseAll(TxnId txn);

  bool HoldsRead(TxnId txn, Key key) const;  // read or write lock
  bool HoldsWrite(TxnId txn, Key key) const;
  bool IsWaiting(TxnId txn) const;
  std::vector<TxnId> Holders(Key key) const;
  std::optional<LockAge> AgeOf(TxnId txn) const;

  void DescribeBlocked(const std::string& who, std::vector<std::string>& out) const;

 private:
  struct Request {
    LockAge age;
    LockMode mode;
    GrantFn granted;
  };
  struct KeyState {
    std::set<TxnId> readers;
    std::optional<TxnId> writer;
    std::vector<Request> queue;
  };
  struct Deferred {
    std::vector<GrantFn> grants;
    std::vector<TxnId> wounds;
  };

  bool Compatible(const KeyState& ks, TxnId txn, LockMode mode) const;
  void Grant(KeyState& ks, Key key, TxnId txn, LockMode mode);
  void CollectWounds(const KeyState& ks, const LockAge& requester, LockMode mode,
                     Deferred& deferred) const;
  void Reevaluate(Key key, Deferred& deferred);
  void RunDeferred(Deferred& deferred);

  WoundFn wound_;
  std::unordered_map<Key, KeyState> keys_;
  std::unordered_map<TxnId, std::set<Key>> held_;
  std::unordered_map<TxnId, std::set<Key>> waiting_;
  std::unordered_map<TxnId, LockAge> ages_;
};

}  // namespace rsskv

#endif  // RSSKV_LOCK_TABLE_H_
