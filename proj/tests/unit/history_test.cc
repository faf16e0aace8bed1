#include <gtest/gtest.h>

#include <sstream>

#include "rsskv/history.h"

namespace rsskv {
namespace {

HistoryEvent Full() {
  HistoryEvent e;
  e.kind = EventKind::kRespond;
  e.txn = 12;
  e.process = 3;
  e.service = "kv";
  e.type = TxnType::kReadWrite;
  e.time = 123'456;
  e.reads = {{"kv/a", 7}, {"kv/c", kInitialWriter}};
  e.aborted = true;
  e.t_read = Timestamp{10, 1};
  e.t_min = Timestamp{9, 0};
  e.t_snap = Timestamp{8, 2};
  e.t_c = Timestamp{11, 3};
  return e;
}

TEST(HistoryTest, EventRoundTrip) {
  const HistoryEvent e = Full();
  EXPECT_EQ(ParseEvent(FormatEvent(e)), e);
}

TEST(HistoryTest, InvokeCarriesWrites) {
  HistoryEvent e;
  e.txn = 5;
  e.process = 1;
  e.service = "kv";
  e.type = TxnType::kReadWrite;
  e.writes = {{"kv/a", 0}, {"kv/b", 1}};
  e.t_min = Timestamp{4, 0};
  EXPECT_EQ(ParseEvent(FormatEvent(e)), e);
}

TEST(HistoryTest, MessageEventRoundTrip) {
  HistoryEvent e;
  e.kind = EventKind::kSend;
  e.process = 4;
  e.time = 5;
  e.message = 99;
  const HistoryEvent back = ParseEvent(FormatEvent(e));
  EXPECT_EQ(back.kind, EventKind::kSend);
  EXPECT_EQ(back.message, 99u);
  EXPECT_EQ(back.process, 4u);
}

TEST(HistoryTest, StreamSkipsCommentsAndBlanks) {
  std::stringstream s;
  WriteHistory(s, {Full(), Full()});
  std::stringstream in("# header\n\n" + s.str());
  const auto events = ReadHistory(in);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[1], Full());
}

TEST(HistoryTest, BadLineNamesLineNumber) {
  std::stringstream in("{\"kind\":\"invoke\",\"txn\":1,\"process\":1,\"type\":\"ro\",\"time\":0}\n{oops\n");
  try {
    ReadHistory(in);
    FAIL() << "expected a parse error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(HistoryTest, UnknownKindRejected) {
  EXPECT_THROW(ParseEvent(R"({"kind":"poke","txn":1,"process":1,"time":0})"), std::runtime_error);
}

}  // namespace
}  // namespace rsskv
