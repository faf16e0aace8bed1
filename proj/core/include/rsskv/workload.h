#ifndef RSSKV_WORKLOAD_H_
#define RSSKV_WORKLOAD_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rsskv/types.h"
#include "rsskv/zipf.h"

namespace rsskv {

enum class RetwisTxn { kAddUser, kFollow, kPostTweet, kLoadTimeline };

const char* RetwisName(RetwisTxn type);

// Transaction mix and per-type key counts. The key counts are conventions:
// add-user writes one key, follow reads and writes two, post-tweet reads and
// writes three, load-timeline reads `timeline_keys` (read-only).
struct RetwisMix {
  double add_user = 0.05;
  double follow = 0.15;
  double post_tweet = 0.30;
  double load_timeline = 0.50;
  int follow_keys = 2;
  int post_tweet_keys = 3;
  int timeline_keys = 10;
};

struct WorkloadConfig {
  std::uint64_t num_keys = 10000;
  double skew = 0.9;
  RetwisMix mix;
};

struct TxnSpec {
  RetwisTxn type = RetwisTxn::kAddUser;
  bool read_only = false;
  std::vector<Key> reads;
  std::vector<Key> writes;
};

class RetwisGenerator {
 public:
  explicit RetwisGenerator(WorkloadConfig config);

  TxnSpec Next(RandomStream& rng) const;
  const WorkloadConfig& config() const { return config_; }

 private:
  std::vector<Key> DistinctKeys(RandomStream& rng, int count) const;

  WorkloadConfig config_;
  ZipfGenerator zipf_;
};

}  // namespace rsskv

#endif  // RSSKV_WORKLOAD_H_
