#include "rsskv/version_store.h"

#include <algorithm>
#include <stdexcept>

namespace rsskv {

namespace {
const std::vector<Version> kNoVersions;
}

void VersionStore::Apply(Timestamp t_c, Key key, Value value) {
  auto& list = versions_[key];
  auto pos = std::lower_bound(list.begin(), list.end(), t_c,
                              [](const Version& v, Timestamp t) { return v.t_c < t; });
  if (pos != list.end() && pos->t_c == t_c) {
    throw std::logic_error("duplicate version for key " + std::to_string(key) + " at " +
                           t_c.ToString());
  }
  list.insert(pos, Version{t_c, key, value});
}

Version VersionStore::ReadAt(Key key, Timestamp t) const {
  auto it = versions_.find(key);
  if (it != versions_.end()) {
    const auto& list = it->second;
    auto pos = std::upper_bound(list.begin(), list.end(), t,
                                [](Timestamp t, const Version& v) { return t < v.t_c; });
    if (pos != list.begin()) return *std::prev(pos);
  }
  return Version{Timestamp::Zero(), key, Value{}};
}

Version VersionStore::Latest(Key key) const { return ReadAt(key, Timestamp::Max()); }

const std::vector<Version>& VersionStore::VersionsOf(Key key) const {
  auto it = versions_.find(key);
  return it == versions_.end() ? kNoVersions : it->second;
}

std::vector<Version> VersionStore::AllVersions() const {
  std::vector<Version> out;
  for (const auto& [key, list] : versions_) out.insert(out.end(), list.begin(), list.end());
  std::sort(out.begin(), out.end(), [](const Version& a, const Version& b) {
    return a.key != b.key ? a.key < b.key : a.t_c < b.t_c;
  });
  return out;
}

}  // namespace rsskv
