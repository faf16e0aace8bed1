#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "rsskv/librss.h"

namespace rsskv {
namespace {

ServiceRegistry::FenceFn Recording(std::vector<std::string>& log, std::string name) {
  return [&log, name](std::function<void()> done) {
    log.push_back("fence " + name);
    done();
  };
}

TEST(RegistryTest, RegisterAndResolve) {
  ServiceRegistry r;
  std::vector<std::string> log;
  r.RegisterService("kv", Recording(log, "kv"));
  r.RegisterService("queue", Recording(log, "queue"));
  EXPECT_TRUE(r.Contains("kv"));
  EXPECT_TRUE(r.Contains("queue"));
}

TEST(RegistryTest, DuplicateRejected) {
  ServiceRegistry r;
  std::vector<std::string> log;
  r.RegisterService("kv", Recording(log, "kv"));
  EXPECT_THROW(r.RegisterService("kv", Recording(log, "kv")), RegistryError);
}

TEST(RegistryTest, ReRegisterAfterUnregister) {
  ServiceRegistry r;
  std::vector<std::string> log;
  r.RegisterService("kv", Recording(log, "kv"));
  r.UnregisterService("kv");
  EXPECT_FALSE(r.Contains("kv"));
  EXPECT_NO_THROW(r.RegisterService("kv", Recording(log, "kv")));
}

TEST(RegistryTest, BadNames) {
  ServiceRegistry r;
  EXPECT_THROW(r.RegisterService("", nullptr), RegistryError);
  EXPECT_THROW(r.RegisterService("a:b", nullptr), RegistryError);
  EXPECT_THROW(r.UnregisterService("nope"), RegistryError);
}

TEST(RegistryTest, FencesOnlyOnSwitch) {
  ServiceRegistry r;
  std::vector<std::string> log;
  r.RegisterService("kv", Recording(log, "kv"));
  r.RegisterService("queue", Recording(log, "queue"));
  CausalContext ctx;
  std::vector<bool> fenced;
  auto start = [&](const std::string& name) {
    r.StartTransaction(ctx, name, [&, name](bool f) {
      fenced.push_back(f);
      log.push_back("txn " + name);
    });
  };
  start("kv");
  start("kv");
  start("queue");
  start("kv");
  EXPECT_EQ(fenced, (std::vector<bool>{false, false, true, true}));
  EXPECT_EQ(log, (std::vector<std::string>{"txn kv", "txn kv", "fence kv", "txn queue",
                                           "fence queue", "txn kv"}));
  EXPECT_EQ(r.fences_run(), 2u);
  EXPECT_EQ(ctx.last_service, "kv");
}

TEST(RegistryTest, UnknownServiceRejected) {
  ServiceRegistry r;
  CausalContext ctx;
  EXPECT_THROW(r.StartTransaction(ctx, "kv", [](bool) {}), RegistryError);
}

TEST(RegistryTest, AsynchronousFenceDelaysTransaction) {
  ServiceRegistry r;
  std::function<void()> pending;
  r.RegisterService("a", [&](std::function<void()> done) { pending = std::move(done); });
  r.RegisterService("b", [](std::function<void()> done) { done(); });
  CausalContext ctx;
  bool ran = false;
  r.StartTransaction(ctx, "a", [](bool) {});
  r.StartTransaction(ctx, "b", [&](bool) { ran = true; });
  EXPECT_FALSE(ran);
  ASSERT_TRUE(pending);
  pending();
  EXPECT_TRUE(ran);
}

TEST(ContextTest, MergeTakesNewerSender) {
  CausalContext recv{Timestamp::At(4), "kv"};
  MergeContext(recv, CausalContext{Timestamp::At(9), "queue"});
  EXPECT_EQ(recv.t_min, Timestamp::At(9));
  EXPECT_EQ(recv.last_service, "queue");
}

TEST(ContextTest, EqualTminKeepsReceiverService) {
  CausalContext recv{Timestamp::At(9), "kv"};
  MergeContext(recv, CausalContext{Timestamp::At(9), "queue"});
  EXPECT_EQ(recv.last_service, "kv");
}

TEST(ContextTest, EmptySenderLeavesReceiver) {
  CausalContext recv{Timestamp::At(9), "kv"};
  MergeContext(recv, CausalContext{});
  EXPECT_EQ(recv.t_min, Timestamp::At(9));
  EXPECT_EQ(recv.last_service, "kv");
}

TEST(ContextTest, WireEncoding) {
  const CausalContext c{Timestamp{1234, 2}, "kv"};
  EXPECT_EQ(c.Encode(), "1235:kv");
  const auto back = CausalContext::Decode(c.Encode());
  EXPECT_EQ(back.t_min, Timestamp::At(1235));
  EXPECT_GE(back.t_min, c.t_min);
  EXPECT_EQ(back.last_service, "kv");
  EXPECT_FALSE(CausalContext::Decode("0:").last_service.has_value());
  EXPECT_THROW(CausalContext::Decode("12"), std::invalid_argument);
  EXPECT_THROW(CausalContext::Decode("x:kv"), std::invalid_argument);
}

}  // namespace
}  // namespace rsskv
