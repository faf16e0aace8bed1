#include "rsskv/history.h"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace rsskv {

using nlohmann::json;

namespace {

const char* KindName(EventKind kind) {
  switch (kind) {
    case EventKind::kInvoke:
      return "invoke";
    case EventKind::kRespond:
      return "respond";
    case EventKind::kSend:
      return "send";
    case EventKind::kRecv:
      return "recv";
  }
  return "?";
}

EventKind ParseKind(const std::string& s) {
  if (s == "invoke") return EventKind::kInvoke;
  if (s == "respond") return EventKind::kRespond;
  if (s == "send") return EventKind::kSend;
  if (s == "recv") return EventKind::kRecv;
  throw std::runtime_error("unknown event kind '" + s + "'");
}

TxnType ParseType(const std::string& s) {
  if (s == "ro") return TxnType::kReadOnly;
  if (s == "rw") return TxnType::kReadWrite;
  if (s == "fence") return TxnType::kFence;
  throw std::runtime_error("unknown txn type '" + s + "'");
}

json TsToJson(const Timestamp& ts) { return json::array({ts.micros, ts.logical}); }

Timestamp TsFromJson(const json& j) {
  if (j.is_number_integer()) return Timestamp::At(j.get<Micros>());
  return Timestamp{j.at(0).get<Micros>(), j.at(1).get<std::uint64_t>()};
}

}  // namespace

const char* TxnTypeName(TxnType type) {
  switch (type) {
    case TxnType::kReadOnly:
      return "ro";
    case TxnType::kReadWrite:
      return "rw";
    case TxnType::kFence:
      return "fence";
  }
  return "?";
}

std::string FormatEvent(const HistoryEvent& e) {
  json j;
  j["kind"] = KindName(e.kind);
  if (e.kind == EventKind::kSend || e.kind == EventKind::kRecv) {
    j["process"] = e.process;
    j["time"] = e.time;
    j["message"] = e.message;
    return j.dump();
  }
  j["txn"] = e.txn;
  j["process"] = e.process;
  j["service"] = e.service;
  j["type"] = TxnTypeName(e.type);
  j["time"] = e.time;
  if (e.kind == EventKind::kInvoke) {
    if (!e.writes.empty()) {
      json w = json::array();
      for (const auto& r : e.writes) w.push_back(json::array({r.key, r.counter}));
      j["writes"] = std::move(w);
    }
  } else {
    j["status"] = e.aborted ? "aborted" : "ok";
    if (!e.reads.empty()) {
      json r = json::array();
      for (const auto& rd : e.reads) r.push_back(json::array({rd.key, rd.writer}));
      j["reads"] = std::move(r);
    }
  }
  if (e.t_read) j["t_read"] = TsToJson(*e.t_read);
  if (e.t_min) j["t_min"] = TsToJson(*e.t_min);
  if (e.t_snap) j["t_snap"] = TsToJson(*e.t_snap);
  if (e.t_c) j["t_c"] = TsToJson(*e.t_c);
  return j.dump();
}

namespace {

HistoryEvent FromJson(const json& j) {
  HistoryEvent e;
  e.kind = ParseKind(j.at("kind").get<std::string>());
  e.process = j.at("process").get<ProcessId>();
  e.time = j.at("time").get<Micros>();
  if (e.kind == EventKind::kSend || e.kind == EventKind::kRecv) {
    e.message = j.at("message").get<std::uint64_t>();
    return e;
  }
  e.txn = j.at("txn").get<TxnId>();
  e.service = j.value("service", std::string{});
  e.type = ParseType(j.at("type").get<std::string>());
  if (auto it = j.find("writes"); it != j.end()) {
    for (const auto& w : *it) {
      e.writes.push_back(WriteRecord{w.at(0).get<std::string>(), w.at(1).get<std::uint32_t>()});
    }
  }
  if (auto it = j.find("reads"); it != j.end()) {
    for (const auto& r : *it) {
      e.reads.push_back(ReadRecord{r.at(0).get<std::string>(), r.at(1).get<TxnId>()});
    }
  }
  if (auto it = j.find("status"); it != j.end()) {
    const auto status = it->get<std::string>();
    if (status != "ok" && status != "aborted") {
      throw std::runtime_error("unknown status '" + status + "'");
    }
    e.aborted = status == "aborted";
  }
  if (auto it = j.find("t_read"); it != j.end()) e.t_read = TsFromJson(*it);
  if (auto it = j.find("t_min"); it != j.end()) e.t_min = TsFromJson(*it);
  if (auto it = j.find("t_snap"); it != j.end()) e.t_snap = TsFromJson(*it);
  if (auto it = j.find("t_c"); it != j.end()) e.t_c = TsFromJson(*it);
  return e;
}

}  // namespace

HistoryEvent ParseEvent(const std::string& line) {
  try {
    return FromJson(json::parse(line));
  } catch (const json::exception& ex) {
    throw std::runtime_error(ex.what());
  }
}

void WriteHistory(std::ostream& out, const std::vector<HistoryEvent>& events) {
  for (const auto& e : events) out << FormatEvent(e) << '\n';
}

std::vector<HistoryEvent> ReadHistory(std::istream& in) {
  std::vector<HistoryEvent> events;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    try {
      events.push_back(ParseEvent(line));
    } catch (const std::exception& ex) {
      throw std::runtime_error("history line " + std::to_string(number) + ": " + ex.what());
    }
  }
  return events;
}

std::vector<HistoryEvent> LoadHistoryFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open history file " + path);
  return ReadHistory(in);
}

void SaveHistoryFile(const std::string& path, const std::vector<HistoryEvent>& events) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write history file " + path);
  WriteHistory(out, events);
}

}  // namespace rsskv
