#include <gtest/gtest.h>

#include <vector>

#include "rsskv/lock_table.h"
#include "rsskv/simulator.h"

namespace rsskv {
namespace {

LockAge Age(Micros start, TxnId txn) { return LockAge{Timestamp::At(start), txn}; }

class LockTableTest : public ::testing::Test {
 protected:
  std::vector<TxnId> wounded_;
  LockTable locks_{[this](TxnId v) { wounded_.push_back(v); }};
};

TEST_F(LockTableTest, ReadersShare) {
  EXPECT_TRUE(locks_.Acquire(Age(1, 1), 7, LockMode::kRead, nullptr));
  EXPECT_TRUE(locks_.Acquire(Age(2, 2), 7, LockMode::kRead, nullptr));
  EXPECT_TRUE(locks_.HoldsRead(1, 7));
  EXPECT_TRUE(locks_.HoldsRead(2, 7));
  EXPECT_TRUE(wounded_.empty());
}

TEST_F(LockTableTest, OlderRequesterWoundsYoungerHolder) {
  EXPECT_TRUE(locks_.Acquire(Age(9, 2), 7, LockMode::kWrite, nullptr));
  bool granted = false;
  EXPECT_FALSE(locks_.Acquire(Age(5, 1), 7, LockMode::kRead, [&] { granted = true; }));
  EXPECT_EQ(wounded_, (std::vector<TxnId>{2}));
  locks_.ReleaseAll(2);  // the victim aborts
  EXPECT_TRUE(granted);
  EXPECT_TRUE(locks_.HoldsRead(1, 7));
}

TEST_F(LockTableTest, YoungerRequesterWaits) {
  EXPECT_TRUE(locks_.Acquire(Age(5, 1), 7, LockMode::kWrite, nullptr));
  bool granted = false;
  EXPECT_FALSE(locks_.Acquire(Age(9, 2), 7, LockMode::kRead, [&] { granted = true; }));
  EXPECT_TRUE(wounded_.empty());
  EXPECT_TRUE(locks_.IsWaiting(2));
  locks_.ReleaseAll(1);
  EXPECT_TRUE(granted);
  EXPECT_FALSE(locks_.IsWaiting(2));
}

TEST_F(LockTableTest, WriteExcludesEveryone) {
  EXPECT_TRUE(locks_.Acquire(Age(5, 1), 7, LockMode::kWrite, nullptr));
  EXPECT_FALSE(locks_.Acquire(Age(6, 2), 7, LockMode::kWrite, nullptr));
  EXPECT_FALSE(locks_.Acquire(Age(7, 3), 7, LockMode::kRead, nullptr));
  EXPECT_EQ(locks_.Holders(7), (std::vector<TxnId>{1}));
}

TEST_F(LockTableTest, UpgradeBySoleReader) {
  EXPECT_TRUE(locks_.Acquire(Age(5, 1), 7, LockMode::kRead, nullptr));
  EXPECT_TRUE(locks_.Acquire(Age(5, 1), 7, LockMode::kWrite, nullptr));
  EXPECT_TRUE(locks_.HoldsWrite(1, 7));
}

TEST_F(LockTableTest, UpgradeWoundsYoungerReader) {
  EXPECT_TRUE(locks_.Acquire(Age(5, 1), 7, LockMode::kRead, nullptr));
  EXPECT_TRUE(locks_.Acquire(Age(8, 2), 7, LockMode::kRead, nullptr));
  bool granted = false;
  EXPECT_FALSE(locks_.Acquire(Age(5, 1), 7, LockMode::kWrite, [&] { granted = true; }));
  EXPECT_EQ(wounded_, (std::vector<TxnId>{2}));
  locks_.ReleaseAll(2);
  EXPECT_TRUE(granted);
  EXPECT_TRUE(locks_.HoldsWrite(1, 7));
}

TEST_F(LockTableTest, WaitersGrantedOldestFirst) {
  EXPECT_TRUE(locks_.Acquire(Age(1, 1), 7, LockMode::kWrite, nullptr));
  std::vector<TxnId> order;
  locks_.Acquire(Age(30, 3), 7, LockMode::kWrite, [&] { order.push_back(3); });
  locks_.Acquire(Age(20, 2), 7, LockMode::kWrite, [&] { order.push_back(2); });
  locks_.ReleaseAll(1);
  EXPECT_EQ(order, (std::vector<TxnId>{2}));
  locks_.ReleaseAll(2);
  EXPECT_EQ(order, (std::vector<TxnId>{2, 3}));
}

TEST_F(LockTableTest, ReleaseDropsQueuedRequests) {
  EXPECT_TRUE(locks_.Acquire(Age(1, 1), 7, LockMode::kWrite, nullptr));
  bool granted = false;
  locks_.Acquire(Age(5, 2), 7, LockMode::kWrite, [&] { granted = true; });
  locks_.ReleaseAll(2);
  locks_.ReleaseAll(1);
  EXPECT_FALSE(granted);
  EXPECT_TRUE(locks_.Holders(7).empty());
}

TEST_F(LockTableTest, AgeIsFixedByFirstRequest) {
  locks_.Acquire(Age(5, 1), 7, LockMode::kRead, nullptr);
  locks_.Acquire(Age(50, 1), 8, LockMode::kRead, nullptr);
  EXPECT_EQ(locks_.AgeOf(1)->start, Timestamp::At(5));
}

// Property: under random traffic a waiting request always has some holder
// or queued request ahead of it, and no two writers hold one key.
TEST_F(LockTableTest, RandomTrafficKeepsExclusion) {
  RandomStream rng(11);
  std::vector<TxnId> live;
  TxnId next = 1;
  for (int step = 0; step < 5'000; ++step) {
    if (live.empty() || rng.Bernoulli(0.6)) {
      const TxnId txn = live.empty() || rng.Bernoulli(0.5)
                            ? next++
                            : live[rng.UniformInt(0, live.size() - 1)];
      if (std::find(live.begin(), live.end(), txn) == live.end()) live.push_back(txn);
      if (locks_.IsWaiting(txn)) continue;
      locks_.Acquire(Age(static_cast<Micros>(txn), txn), rng.UniformInt(0, 4),
                     rng.Bernoulli(0.5) ? LockMode::kRead : LockMode::kWrite, nullptr);
    } else {
      const std::size_t i = rng.UniformInt(0, live.size() - 1);
      locks_.ReleaseAll(live[i]);
      live.erase(live.begin() + static_cast<long>(i));
    }
    for (Key k = 0; k < 5; ++k) {
      int writers = 0;
      for (TxnId t : locks_.Holders(k)) writers += locks_.HoldsWrite(t, k) ? 1 : 0;
      EXPECT_LE(writers, 1);
      if (writers == 1) EXPECT_EQ(locks_.Holders(k).size(), 1u);
    }
    // Wounded victims abort.
    for (TxnId v : wounded_) {
      locks_.ReleaseAll(v);
      live.erase(std::remove(live.begin(), live.end(), v), live.end());
    }
    wounded_.clear();
  }
}

}  // namespace
}  // namespace rsskv
