#ifndef RSSKV_VERSION_STORE_H_
#define RSSKV_VERSION_STORE_H_

#include <unordered_map>
#include <vector>

#include "rsskv/types.h"

namespace rsskv {

// Multi-versioned key-value storage. Every key implicitly starts with the
// initial version (t_c = 0, writer = kInitialWriter).
class VersionStore {
 public:
  // Throws if (key, t_c) already has a version.
  void Apply(Timestamp t_c, Key key, Value value);

  // Version with the greatest t_c <= t.
  Version ReadAt(Key key, Timestamp t) const;
  Version Latest(Key key) const;

  // Committed versions of `key` in t_c order, excluding the initial one.
  const std::vector<Version>& VersionsOf(Key key) const;
  std::size_t key_count() const { return versions_.size(); }
  std::vector<Version> AllVersions() const;

 private:
  std::unordered_map<Key, std::vector<Version>> versions_;
};

}  // namespace rsskv

#endif  // RSSKV_VERSION_STORE_H_
