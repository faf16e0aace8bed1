#include "rsskv/workload.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsskv {

const char* RetwisName(RetwisTxn type) {
  switch (type) {
    case RetwisTxn::kAddUser:
      return "add-user";
    case RetwisTxn::kFollow:
      return "follow";
    case RetwisTxn::kPostTweet:
      return "post-tweet";
    case RetwisTxn::kLoadTimeline:
      return "load-timeline";
  }
  return "?";
}

RetwisGenerator::RetwisGenerator(WorkloadConfig config)
    : config_(config), zipf_(config.num_keys, config.skew) {
  const RetwisMix& m = config_.mix;
  const double total = m.add_user + m.follow + m.post_tweet + m.load_timeline;
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("transaction mix must sum to 1");
  if (m.add_user < 0 || m.follow < 0 || m.post_tweet < 0 || m.load_timeline < 0) {
    throw std::invalid_argument("negative mix weight");
  }
  if (m.follow_keys < 1 || m.post_tweet_keys < 1 || m.timeline_keys < 1) {
    throw std::invalid_argument("key counts must be positive");
  }
}

std::vector<Key> RetwisGenerator::DistinctKeys(RandomStream& rng, int count) const {
  const auto want = static_cast<std::size_t>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(count), config_.num_keys));
  std::vector<Key> keys;
  while (keys.size() < want) {
    const Key k = zipf_.Sample(rng);
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  return keys;
}

TxnSpec RetwisGenerator::Next(RandomStream& rng) const {
  const RetwisMix& m = config_.mix;
  const double u = rng.Uniform01();
  TxnSpec spec;
  if (u < m.add_user) {
    spec.type = RetwisTxn::kAddUser;
    spec.writes = DistinctKeys(rng, 1);
  } else if (u < m.add_user + m.follow) {
    spec.type = RetwisTxn::kFollow;
    spec.reads = DistinctKeys(rng, m.follow_keys);
    spec.writes = spec.reads;
  } else if (u < m.add_user + m.follow + m.post_tweet) {
    spec.type = RetwisTxn::kPostTweet;
    spec.reads = DistinctKeys(rng, m.post_tweet_keys);
    spec.writes = spec.reads;
  } else {
    spec.type = RetwisTxn::kLoadTimeline;
    spec.read_only = true;
    spec.reads = DistinctKeys(rng, m.timeline_keys);
  }
  return spec;
}

}  // namespace rsskv
