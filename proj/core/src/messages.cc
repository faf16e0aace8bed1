#include "rsskv/messages.h"

namespace rsskv {

namespace {

struct Namer {
  std::string_view operator()(const ReadRequest&) const { return "ReadRequest"; }
  std::string_view operator()(const ReadReply&) const { return "ReadReply"; }
  std::string_view operator()(const Wounded&) const { return "Wounded"; }
  std::string_view operator()(const AbortTxn&) const { return "AbortTxn"; }
  std::string_view operator()(const Prepare&) const { return "Prepare"; }
  std::string_view operator()(const PrepareOk&) const { return "PrepareOk"; }
  std::string_view operator()(const PrepareFail&) const { return "PrepareFail"; }
  std::string_view operator()(const WoundRequest&) const { return "WoundRequest"; }
  std::string_view operator()(const Decide&) const { return "Decide"; }
  std::string_view operator()(const CommitReply&) const { return "CommitReply"; }
  std::string_view operator()(const ROCommit&) const { return "ROCommit"; }
  std::string_view operator()(const ROFastReply&) const { return "ROFastReply"; }
  std::string_view operator()(const ROSlowReply&) const { return "ROSlowReply"; }
  std::string_view operator()(const AppSignal&) const { return "AppSignal"; }
};

}  // namespace

std::string_view MessageName(const Message& msg) { return std::visit(Namer{}, msg); }

bool IsReadOnlyMessage(std::string_view name) {
  return name == "ROCommit" || name == "ROFastReply" || name == "ROSlowReply";
}

}  // namespace rsskv
