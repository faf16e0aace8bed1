#include <gtest/gtest.h>

#include "rsskv/checker.h"
#include "rsskv/scenarios.h"

namespace rsskv {
namespace {

TEST(ScenarioTest, LitmusSeparatesModels) {
  const auto h = LitmusHistory();
  EXPECT_EQ(Check(h, Model::kRss).kind, VerdictKind::kAccept);
  EXPECT_EQ(Check(h, Model::kRsc).kind, VerdictKind::kAccept);
  EXPECT_EQ(Check(h, Model::kStrictSerializable).kind, VerdictKind::kReject);
}

TEST(ScenarioTest, FarRegionExtendsMatrix) {
  const LatencyMatrix base = LatencyMatrix::ThreeRegionDefault();
  const LatencyMatrix m = WithFarRegion(base, 200 * kMillis);
  ASSERT_EQ(m.size(), base.size() + 1);
  const RegionId ap = m.Find("AP");
  for (RegionId r = 0; r < base.size(); ++r) {
    EXPECT_EQ(m.Rtt(ap, r), 200 * kMillis);
    EXPECT_EQ(m.Rtt(r, ap), 200 * kMillis);
    for (RegionId q = 0; q < base.size(); ++q) EXPECT_EQ(m.Rtt(r, q), base.Rtt(r, q));
  }
}

class FenceScenarioTest : public ::testing::TestWithParam<bool> {};

TEST_P(FenceScenarioTest, FencedReaderSeesWholeWrite) {
  FenceScenarioOptions options;
  options.fence = true;
  options.signal_from_observer = GetParam();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ScenarioResult r = RunFenceScenario(seed, options);
    ASSERT_TRUE(r.completed) << "seed " << seed << ": " << r.detail;
    EXPECT_TRUE(r.observed) << "seed " << seed;
    EXPECT_EQ(r.fences, 1u);
    EXPECT_TRUE(r.audit.ok()) << r.audit.violations.front();
    EXPECT_EQ(r.verdict.kind, VerdictKind::kAccept) << "seed " << seed << ": " << r.verdict.note;
  }
}

INSTANTIATE_TEST_SUITE_P(Signal, FenceScenarioTest, ::testing::Bool());

TEST(CompositionScenarioTest, IndependentServicesViolateWithoutFences) {
  int rejected = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScenarioResult r = RunCompositionScenario(seed, false);
    ASSERT_TRUE(r.completed) << r.detail;
    EXPECT_TRUE(r.audit.ok());
    EXPECT_EQ(r.fences, 0u);
    if (r.verdict.kind == VerdictKind::kReject) ++rejected;
  }
  EXPECT_GT(rejected, 0);
}

TEST(CompositionScenarioTest, LibraryRestoresRss) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScenarioResult r = RunCompositionScenario(seed, true);
    ASSERT_TRUE(r.completed) << r.detail;
    EXPECT_TRUE(r.audit.ok());
    EXPECT_GT(r.fences, 0u);
    EXPECT_EQ(r.verdict.kind, VerdictKind::kAccept) << "seed " << seed << ": " << r.verdict.note;
  }
}

}  // namespace
}  // namespace rsskv
