#include <gtest/gtest.h>

#include <algorithm>

#include "rsskv/coordinator_planner.h"

namespace rsskv {
namespace {

constexpr RegionId kCa = 0, kVa = 1, kIr = 2;

// Quorum delays of CA/VA/IR leaders with the other two regions as followers.
const std::vector<Micros> kQuorum{62'000, 62'000, 68'000};

TEST(PlannerTest, VirginiaClientOverCaliforniaAndVirginia) {
  const auto m = LatencyMatrix::ThreeRegionDefault();
  CoordinatorPlanner planner(m, {kCa, kVa, kIr}, kQuorum);
  const auto choice = planner.Choose(kVa, {0, 1});
  EXPECT_EQ(choice.coordinator, 1u);
  // Both choices cost 31 + 62 + 31 + 62 ms plus the intra-region hop.
  EXPECT_EQ(choice.estimate, 186'100);
  // The plain round-trip count picks VA as well: VA-led needs one local hop
  // and one CA round trip; CA-led needs two CA round trips.
  const Micros va_led = m.Rtt(kVa, kVa) + m.Rtt(kVa, kCa);
  const Micros ca_led = m.Rtt(kVa, kCa) + m.Rtt(kCa, kVa);
  EXPECT_LT(va_led, ca_led);
}

TEST(PlannerTest, SingleShardCoordinatesItself) {
  const auto m = LatencyMatrix::ThreeRegionDefault();
  CoordinatorPlanner planner(m, {kCa, kVa, kIr}, kQuorum);
  for (ShardId s = 0; s < 3; ++s) {
    const auto c = planner.Choose(kCa, {s});
    EXPECT_EQ(c.coordinator, s);
    EXPECT_EQ(c.estimate, m.Rtt(kCa, static_cast<RegionId>(s)) + kQuorum[s]);
  }
}

// Brute force over coordinators with the estimate formula written out.
TEST(PlannerTest, TableMatchesBruteForce) {
  const auto m = LatencyMatrix::ThreeRegionDefault();
  const std::vector<RegionId> leaders{kCa, kVa, kIr, kVa};
  const std::vector<Micros> q{62'000, 62'000, 68'000, 62'000};
  CoordinatorPlanner planner(m, leaders, q);
  Micros max_est = 0;
  for (RegionId client = 0; client < 3; ++client) {
    for (unsigned mask = 1; mask < 16; ++mask) {
      std::vector<ShardId> parts;
      for (ShardId s = 0; s < 4; ++s) {
        if (mask & (1u << s)) parts.push_back(s);
      }
      Micros best = -1;
      for (ShardId c : parts) {
        Micros ready = m.OneWay(client, leaders[c]);
        for (ShardId p : parts) {
          if (p == c) continue;
          ready = std::max(ready, m.OneWay(client, leaders[p]) + q[p] + m.OneWay(leaders[p], leaders[c]));
        }
        const Micros total = ready + q[c] + m.OneWay(leaders[c], client);
        if (best < 0 || total < best) best = total;
      }
      const auto choice = planner.Choose(client, parts);
      EXPECT_EQ(choice.estimate, best);
      EXPECT_TRUE(std::find(parts.begin(), parts.end(), choice.coordinator) != parts.end());
      max_est = std::max(max_est, best);
    }
  }
  EXPECT_EQ(planner.max_estimate(), max_est);
}

}  // namespace
}  // namespace rsskv
