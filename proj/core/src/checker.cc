#include "rsskv/checker.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace rsskv {

namespace {

struct TxnInfo {
  TxnId txn = 0;
  ProcessId process = 0;
  std::string service;
  TxnType type = TxnType::kReadOnly;
  Micros invoke = 0;
  std::optional<Micros> respond;
  bool aborted = false;
  std::vector<WriteRecord> writes;
  std::vector<ReadRecord> reads;
  bool included = false;
  std::vector<std::size_t> units;
};

struct Parsed {
  std::vector<TxnInfo> txns;  // in invoke order
  std::unordered_map<TxnId, std::size_t> index;
  std::vector<std::string> aborted_reads;
};

bool Writes(const TxnInfo& t, const std::string& key) {
  return std::any_of(t.writes.begin(), t.writes.end(),
                     [&](const WriteRecord& w) { return w.key == key; });
}

Parsed ParseTxns(const std::vector<HistoryEvent>& events) {
  Parsed p;
  std::unordered_map<ProcessId, TxnId> outstanding;
  std::unordered_set<std::uint64_t> sent, received;
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::kInvoke: {
        if (p.index.contains(e.txn)) {
          throw HistoryError("txn " + std::to_string(e.txn) + " invoked twice");
        }
        if (auto it = outstanding.find(e.process); it != outstanding.end()) {
          throw HistoryError("process " + std::to_string(e.process) + " invokes txn " +
                             std::to_string(e.txn) + " while txn " +
                             std::to_string(it->second) + " is outstanding");
        }
        outstanding[e.process] = e.txn;
        TxnInfo t;
        t.txn = e.txn;
        t.process = e.process;
        t.service = e.service;
        t.type = e.type;
        t.invoke = e.time;
        t.writes = e.writes;
        if (e.type != TxnType::kReadWrite && !e.writes.empty()) {
          throw HistoryError("non read-write txn " + std::to_string(e.txn) + " has writes");
        }
        if (e.txn == kInitialWriter) throw HistoryError("txn id 0 is reserved");
        p.index[e.txn] = p.txns.size();
        p.txns.push_back(std::move(t));
        break;
      }
      case EventKind::kRespond: {
        auto it = p.index.find(e.txn);
        if (it == p.index.end()) {
          throw HistoryError("response for unknown txn " + std::to_string(e.txn));
        }
        TxnInfo& t = p.txns[it->second];
        if (t.respond) throw HistoryError("txn " + std::to_string(e.txn) + " responded twice");
        if (t.process != e.process || t.type != e.type) {
          throw HistoryError("response of txn " + std::to_string(e.txn) +
                             " does not match its invocation");
        }
        if (e.time < t.invoke) {
          throw HistoryError("txn " + std::to_string(e.txn) + " responds before its invocation");
        }
        t.respond = e.time;
        t.aborted = e.aborted;
        t.reads = e.reads;
        outstanding.erase(e.process);
        break;
      }
      case EventKind::kSend:
        if (!sent.insert(e.message).second) {
          throw HistoryError("message " + std::to_string(e.message) + " sent twice");
        }
        break;
      case EventKind::kRecv:
        if (!sent.contains(e.message)) {
          throw HistoryError("message " + std::to_string(e.message) + " received before sent");
        }
        if (!received.insert(e.message).second) {
          throw HistoryError("message " + std::to_string(e.message) + " received twice");
        }
        break;
    }
  }

  // Complete, non-aborted transactions are kept; an incomplete writer is
  // kept once a kept transaction reads from it.
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < p.txns.size(); ++i) {
    TxnInfo& t = p.txns[i];
    if (t.respond && !t.aborted) {
      t.included = true;
      work.push_back(i);
    }
  }
  while (!work.empty()) {
    const std::size_t i = work.back();
    work.pop_back();
    for (const auto& r : p.txns[i].reads) {
      if (r.writer == kInitialWriter) continue;
      auto it = p.index.find(r.writer);
      if (it == p.index.end()) {
        throw HistoryError("txn " + std::to_string(p.txns[i].txn) + " read " + r.key +
                           " from unknown writer " + std::to_string(r.writer));
      }
      TxnInfo& w = p.txns[it->second];
      if (w.type != TxnType::kReadWrite || !Writes(w, r.key)) {
        throw HistoryError("txn " + std::to_string(p.txns[i].txn) + " read " + r.key +
                           " from txn " + std::to_string(r.writer) + ", which does not write it");
      }
      if (w.aborted) {
        p.aborted_reads.push_back("txn " + std::to_string(p.txns[i].txn) + " read " + r.key +
                                  " from aborted txn " + std::to_string(r.writer));
        continue;
      }
      if (!w.included) {
        w.included = true;
        work.push_back(it->second);
      }
    }
  }
  return p;
}

std::size_t UnitsOf(const TxnInfo& t, Model model) {
  if (!t.included) return 0;
  if (model != Model::kRsc || t.type == TxnType::kFence) return 1;
  return t.reads.size() + t.writes.size();
}

// Dense bitset over unit indices.
class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void Set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool Test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  void Or(const Bits& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }

 private:
  std::vector<std::uint64_t> words_;
};

void CloseTransitively(std::vector<std::vector<char>>& m) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (m[k][j]) m[i][j] = 1;
      }
    }
  }
}

}  // namespace

const char* ModelName(Model model) {
  switch (model) {
    case Model::kRss:
      return "rss";
    case Model::kStrictSerializable:
      return "ss";
    case Model::kRsc:
      return "rsc";
  }
  return "?";
}

Model ParseModel(const std::string& name) {
  if (name == "rss") return Model::kRss;
  if (name == "ss") return Model::kStrictSerializable;
  if (name == "rsc") return Model::kRsc;
  throw std::invalid_argument("unknown model '" + name + "' (expected rss, ss or rsc)");
}

const char* VerdictName(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kAccept:
      return "accept";
    case VerdictKind::kReject:
      return "reject";
    case VerdictKind::kUnknown:
      return "unknown";
  }
  return "?";
}

bool AnalyzedHistory::RealTime(std::size_t a, std::size_t b) const {
  return units[a].respond && *units[a].respond < units[b].invoke;
}

bool AnalyzedHistory::Conflicts(std::size_t a, std::size_t b) const {
  for (const auto& r : units[b].reads) {
    if (std::find(units[a].writes.begin(), units[a].writes.end(), r.key) !=
        units[a].writes.end()) {
      return true;
    }
  }
  return false;
}

std::size_t CountUnits(const std::vector<HistoryEvent>& events, Model model) {
  const Parsed p = ParseTxns(events);
  std::size_t n = 0;
  for (const auto& t : p.txns) n += UnitsOf(t, model);
  return n;
}

AnalyzedHistory Analyze(const std::vector<HistoryEvent>& events, Model model) {
  Parsed p = ParseTxns(events);
  AnalyzedHistory h;
  h.aborted_reads = p.aborted_reads;
  // (writer txn, key) -> unit holding that write.
  std::map<std::pair<TxnId, std::string>, std::size_t> write_unit;
  for (auto& t : p.txns) {
    if (!t.included) continue;
    const std::string base = "T" + std::to_string(t.txn);
    auto make = [&](std::string label, Unit::Kind kind) {
      Unit u;
      u.label = std::move(label);
      u.txn = t.txn;
      u.process = t.process;
      u.service = t.service;
      u.kind = kind;
      u.invoke = t.invoke;
      u.respond = t.respond;
      t.units.push_back(h.units.size());
      h.units.push_back(std::move(u));
      return &h.units.back();
    };
    if (model != Model::kRsc || t.type == TxnType::kFence) {
      const Unit::Kind kind = t.type == TxnType::kReadWrite ? Unit::Kind::kWriter
                              : t.type == TxnType::kFence   ? Unit::Kind::kFence
                                                            : Unit::Kind::kReader;
      Unit* u = make(base, kind);
      u->reads = t.reads;
      for (const auto& w : t.writes) {
        u->writes.push_back(w.key);
        write_unit[{t.txn, w.key}] = t.units.back();
      }
      continue;
    }
    for (std::size_t i = 0; i < t.reads.size(); ++i) {
      make(base + ".r" + std::to_string(i), Unit::Kind::kReader)->reads = {t.reads[i]};
    }
    for (std::size_t i = 0; i < t.writes.size(); ++i) {
      make(base + ".w" + std::to_string(i), Unit::Kind::kWriter)->writes = {t.writes[i].key};
      write_unit[{t.txn, t.writes[i].key}] = t.units.back();
    }
  }

  const std::size_t n = h.units.size();
  h.causal.assign(n, std::vector<char>(n, 0));
  // Process order and message passing: walk the events, tracking per process
  // which units' responses it has (transitively) seen.
  std::unordered_map<ProcessId, Bits> known;
  std::unordered_map<std::uint64_t, Bits> in_flight;
  auto known_of = [&](ProcessId pid) -> Bits& {
    auto it = known.find(pid);
    if (it == known.end()) it = known.emplace(pid, Bits(n)).first;
    return it->second;
  };
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::kInvoke: {
        const TxnInfo& t = p.txns[p.index.at(e.txn)];
        if (t.units.empty()) break;
        const Bits& k = known_of(e.process);
        for (std::size_t a = 0; a < n; ++a) {
          if (!k.Test(a)) continue;
          for (std::size_t u : t.units) h.causal[a][u] = 1;
        }
        for (std::size_t i = 0; i < t.units.size(); ++i) {
          for (std::size_t j = i + 1; j < t.units.size(); ++j) h.causal[t.units[i]][t.units[j]] = 1;
        }
        break;
      }
      case EventKind::kRespond: {
        const TxnInfo& t = p.txns[p.index.at(e.txn)];
        Bits& k = known_of(e.process);
        for (std::size_t u : t.units) k.Set(u);
        break;
      }
      case EventKind::kSend:
        in_flight[e.message] = known_of(e.process);
        break;
      case EventKind::kRecv:
        known_of(e.process).Or(in_flight.at(e.message));
        break;
    }
  }
  // Reads-from.
  for (std::size_t b = 0; b < n; ++b) {
    for (const auto& r : h.units[b].reads) {
      if (r.writer == kInitialWriter) continue;
      auto it = write_unit.find({r.writer, r.key});
      if (it != write_unit.end()) h.causal[it->second][b] = 1;
    }
  }
  CloseTransitively(h.causal);
  return h;
}

std::vector<std::vector<char>> RequiredOrder(const AnalyzedHistory& h, Model model) {
  const std::size_t n = h.size();
  auto must = h.causal;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !h.RealTime(a, b)) continue;
      const Unit& ua = h.units[a];
      const Unit& ub = h.units[b];
      if (model == Model::kStrictSerializable) {
        must[a][b] = 1;
        continue;
      }
      if (ua.kind == Unit::Kind::kWriter &&
          (ub.kind == Unit::Kind::kWriter ||
           (ub.kind == Unit::Kind::kReader && h.Conflicts(a, b)))) {
        must[a][b] = 1;
      }
      // Whatever causally precedes a fence is ordered before everything at
      // the same service that starts after the fence ends.
      if (ua.kind == Unit::Kind::kFence && ua.service == ub.service) must[a][b] = 1;
    }
  }
  return must;
}

bool ReplayLegal(const std::vector<Unit>& units, const std::vector<std::size_t>& order) {
  std::unordered_map<std::string, TxnId> last;
  for (std::size_t u : order) {
    for (const auto& r : units.at(u).reads) {
      auto it = last.find(r.key);
      const TxnId current = it == last.end() ? kInitialWriter : it->second;
      if (current != r.writer) return false;
    }
    for (const auto& k : units[u].writes) last[k] = units[u].txn;
  }
  return true;
}

std::optional<std::string> ValidateWitness(const AnalyzedHistory& h, Model model,
                                           const std::vector<std::size_t>& order) {
  const std::size_t n = h.size();
  if (order.size() != n) return "witness has wrong length";
  std::vector<std::size_t> pos(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || pos[order[i]] != n) return "witness is not a permutation";
    pos[order[i]] = i;
  }
  if (!h.aborted_reads.empty()) return h.aborted_reads.front();
  const auto must = RequiredOrder(h, model);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (must[a][b] && pos[a] >= pos[b]) {
        return h.units[a].label + " must precede " + h.units[b].label;
      }
    }
  }
  if (!ReplayLegal(h.units, order)) return "witness is not a legal key-value sequence";
  return std::nullopt;
}

namespace {

class Searcher {
 public:
  Searcher(const AnalyzedHistory& h, const std::vector<std::vector<char>>& closed,
           std::chrono::steady_clock::time_point deadline)
      : n_(h.size()), deadline_(deadline) {
    pred_.assign(n_, 0);
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        if (closed[a][b]) pred_[b] |= Bit(a);
      }
    }
    std::unordered_map<std::string, int> key_index;
    auto key_of = [&](const std::string& k) {
      auto [it, inserted] = key_index.emplace(k, static_cast<int>(key_index.size()));
      return it->second;
    };
    std::map<std::pair<TxnId, int>, int> writer_unit;
    writes_.resize(n_);
    for (std::size_t u = 0; u < n_; ++u) {
      for (const auto& k : h.units[u].writes) {
        const int ki = key_of(k);
        writes_[u].push_back(ki);
        writer_unit[{h.units[u].txn, ki}] = static_cast<int>(u);
      }
    }
    reads_.resize(n_);
    for (std::size_t u = 0; u < n_; ++u) {
      for (const auto& r : h.units[u].reads) {
        const int ki = key_of(r.key);
        int w = -1;
        if (r.writer != kInitialWriter) w = writer_unit.at({r.writer, ki});
        reads_[u].push_back({ki, w});
      }
    }
    readers_.resize(key_index.size());
    for (std::size_t u = 0; u < n_; ++u) {
      for (const auto& [k, w] : reads_[u]) readers_[k].push_back({static_cast<int>(u), w});
    }
    last_.assign(key_index.size(), -1);
  }

  // Returns true and fills `order` if a serialization exists. Sets
  // timed_out() if the deadline passed first.
  bool Run(std::vector<std::size_t>& order) {
    order_.clear();
    const bool ok = Dfs(0);
    if (ok) order = order_;
    return ok;
  }

  bool timed_out() const { return timed_out_; }
  std::uint64_t states() const { return states_; }

 private:
  static std::uint64_t Bit(std::size_t i) { return std::uint64_t{1} << i; }

  std::string StateKey(std::uint64_t placed) const {
    std::string key(reinterpret_cast<const char*>(&placed), sizeof(placed));
    for (int w : last_) key.push_back(static_cast<char>(w));
    return key;
  }

  bool Dead(std::uint64_t placed, std::size_t u) const {
    for (int k : writes_[u]) {
      for (const auto& [r, w] : readers_[k]) {
        if (placed & Bit(r)) continue;
        if (w == -1) return true;
        if ((placed & Bit(w)) && last_[k] != w) return true;
      }
    }
    return false;
  }

  bool Dfs(std::uint64_t placed) {
    if (placed == (n_ == 64 ? ~std::uint64_t{0} : Bit(n_) - 1)) return true;
    if (timed_out_) return false;
    if ((++states_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
      timed_out_ = true;
      return false;
    }
    const std::string key = StateKey(placed);
    if (failed_.contains(key)) return false;
    for (std::size_t u = 0; u < n_; ++u) {
      if ((placed & Bit(u)) || (pred_[u] & ~placed)) continue;
      bool legal = true;
      for (const auto& [k, w] : reads_[u]) {
        if (last_[k] != w) {
          legal = false;
          break;
        }
      }
      if (!legal) continue;
      std::vector<int> saved;
      saved.reserve(writes_[u].size());
      for (int k : writes_[u]) {
        saved.push_back(last_[k]);
        last_[k] = static_cast<int>(u);
      }
      const std::uint64_t next = placed | Bit(u);
      order_.push_back(u);
      if (!Dead(next, u) && Dfs(next)) return true;
      order_.pop_back();
      for (std::size_t i = writes_[u].size(); i-- > 0;) last_[writes_[u][i]] = saved[i];
      if (timed_out_) return false;
    }
    failed_.insert(key);
    return false;
  }

  std::size_t n_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::uint64_t> pred_;
  std::vector<std::vector<int>> writes_;
  std::vector<std::vector<std::pair<int, int>>> reads_;
  std::vector<std::vector<std::pair<int, int>>> readers_;
  std::vector<int> last_;
  std::vector<std::size_t> order_;
  std::unordered_set<std::string> failed_;
  bool timed_out_ = false;
  std::uint64_t states_ = 0;
};

}  // namespace

Verdict Check(const std::vector<HistoryEvent>& events, Model model, const CheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  const std::size_t cap = std::min<std::size_t>(options.max_units, 64);
  v.units = CountUnits(events, model);
  if (v.units > cap) {
    v.kind = VerdictKind::kUnknown;
    v.note = "history has " + std::to_string(v.units) + " units; search cap is " +
             std::to_string(cap);
    return v;
  }
  const AnalyzedHistory h = Analyze(events, model);
  if (!h.aborted_reads.empty()) {
    v.kind = VerdictKind::kReject;
    v.note = h.aborted_reads.front();
    return v;
  }
  auto closed = RequiredOrder(h, model);
  CloseTransitively(closed);
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (closed[a][a]) {
      v.kind = VerdictKind::kReject;
      v.note = "required order has a cycle through " + h.units[a].label;
      return v;
    }
  }
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(options.time_limit_seconds));
  Searcher searcher(h, closed, deadline);
  std::vector<std::size_t> order;
  const bool found = searcher.Run(order);
  v.states_explored = searcher.states();
  if (found) {
    if (auto err = ValidateWitness(h, model, order)) {
      throw std::logic_error("checker produced an invalid witness: " + *err);
    }
    v.kind = VerdictKind::kAccept;
    for (std::size_t u : order) v.witness.push_back(h.units[u].label);
    return v;
  }
  if (searcher.timed_out()) {
    v.kind = VerdictKind::kUnknown;
    v.note = "search time limit reached";
    return v;
  }
  v.kind = VerdictKind::kReject;
  v.note = "no serialization satisfies the " + std::string(ModelName(model)) + " constraints";
  return v;
}

}  // namespace rsskv
