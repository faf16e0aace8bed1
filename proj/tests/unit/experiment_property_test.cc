#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "rsskv/checker.h"
#include "rsskv/experiment.h"

namespace rsskv {
namespace {

RunConfig Small(ConsistencyMode mode, std::uint64_t seed) {
  RunConfig c;
  c.mode = mode;
  c.seed = seed;
  c.leader_regions = {0, 1};
  c.workload.num_keys = 8;
  c.workload.skew = 0.9;
  c.client_model = ClientModel::kClosed;
  c.closed_clients = 3;
  c.txns_per_client = 4;
  return c;
}

RunConfig Loaded(ConsistencyMode mode, double stay_prob) {
  RunConfig c;
  c.mode = mode;
  c.seed = 5;
  c.workload.num_keys = 100'000;
  c.workload.skew = 0.9;
  // Keeps the arrival rate of transactions near 50/s either way.
  c.lambda = stay_prob > 0 ? 5 : 50;
  c.stay_prob = stay_prob;
  c.duration = 20 * kSeconds;
  return c;
}

std::string Serialize(const std::vector<HistoryEvent>& h) {
  std::ostringstream out;
  WriteHistory(out, h);
  return out.str();
}

class SmallRunTest : public ::testing::TestWithParam<ConsistencyMode> {};

TEST_P(SmallRunTest, HistoriesSatisfyTheirModel) {
  const Model model =
      GetParam() == ConsistencyMode::kRss ? Model::kRss : Model::kStrictSerializable;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunOutput out = RunExperiment(Small(GetParam(), seed));
    ASSERT_TRUE(out.completed()) << "seed " << seed;
    EXPECT_TRUE(out.audit.ok()) << "seed " << seed << ": " << out.audit.violations.front();
    const Verdict v = Check(out.history, model);
    EXPECT_EQ(v.kind, VerdictKind::kAccept) << "seed " << seed << ": " << v.note;
  }
}

TEST_P(SmallRunTest, ReadTimestampsNeverGoBackwards) {
  const RunOutput out = RunExperiment(Small(GetParam(), 3));
  std::map<ProcessId, Timestamp> last;
  for (const auto& e : out.history) {
    if (e.kind != EventKind::kInvoke || !e.t_min) continue;
    auto [it, fresh] = last.emplace(e.process, *e.t_min);
    if (!fresh) {
      EXPECT_GE(*e.t_min, it->second) << "process " << e.process;
      it->second = *e.t_min;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, SmallRunTest,
                         ::testing::Values(ConsistencyMode::kRss,
                                           ConsistencyMode::kStrictSerializable));

TEST(ExperimentTest, SameSeedSameRun) {
  const RunConfig c = Loaded(ConsistencyMode::kRss, 0.9);
  const RunOutput a = RunExperiment(c);
  const RunOutput b = RunExperiment(c);
  EXPECT_EQ(a.trace_hash, b.trace_hash);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(Serialize(a.history), Serialize(b.history));
}

TEST(ExperimentTest, DifferentSeedDifferentRun) {
  RunConfig c = Loaded(ConsistencyMode::kRss, 0.9);
  const RunOutput a = RunExperiment(c);
  c.seed = 6;
  EXPECT_NE(RunExperiment(c).trace_hash, a.trace_hash);
}

TEST(ExperimentTest, LoadedRunsPassAudits) {
  for (auto mode : {ConsistencyMode::kRss, ConsistencyMode::kStrictSerializable}) {
    const RunOutput out = RunExperiment(Loaded(mode, 0.9));
    ASSERT_TRUE(out.completed());
    EXPECT_TRUE(out.audit.ok()) << out.audit.violations.front();
    EXPECT_TRUE(out.bound_violations.empty());
    EXPECT_GT(out.audit.rw_checked, 100u);
    EXPECT_GT(out.audit.ro_checked, 100u);
  }
}

// Without session reuse, read-write transactions never see t_min, so both
// modes run them identically.
TEST(ExperimentTest, ReadWriteParityWithoutSessions) {
  const RunOutput ss = RunExperiment(Loaded(ConsistencyMode::kStrictSerializable, 0.0));
  const RunOutput rss = RunExperiment(Loaded(ConsistencyMode::kRss, 0.0));
  const auto a = ss.Select(false);
  const auto b = rss.Select(false);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_GT(a.size(), 100u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seq, b[i].seq);
    EXPECT_EQ(a[i].latency, b[i].latency) << "sample " << i;
  }
  EXPECT_EQ(ss.ReadWriteMessages(), rss.ReadWriteMessages());
}

// RSS adds slow replies and nothing else.
TEST(ExperimentTest, OnlyExtraMessagesAreSlowReplies) {
  const RunOutput ss = RunExperiment(Loaded(ConsistencyMode::kStrictSerializable, 0.0));
  const RunOutput rss = RunExperiment(Loaded(ConsistencyMode::kRss, 0.0));
  EXPECT_EQ(ss.message_counts.count("ROSlowReply"), 0u);
  for (const auto& [name, n] : rss.message_counts) {
    if (name == "ROSlowReply") continue;
    auto it = ss.message_counts.find(name);
    ASSERT_NE(it, ss.message_counts.end()) << name;
    EXPECT_EQ(it->second, n) << name;
  }
}

// Jitter is indexed per channel, and slow replies shift those indices, so the
// sample-by-sample comparison needs a jitter-free network.
TEST(ExperimentTest, ReadOnlyNeverSlowerUnderRss) {
  RunConfig c = Loaded(ConsistencyMode::kStrictSerializable, 0.0);
  c.jitter_fraction = 0;
  const RunOutput ss = RunExperiment(c);
  c.mode = ConsistencyMode::kRss;
  const RunOutput rss = RunExperiment(c);
  const auto a = ss.Select(true);
  const auto b = rss.Select(true);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_GT(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LE(b[i].latency, a[i].latency) << "sample " << i;
  }
}

}  // namespace
}  // namespace rsskv
