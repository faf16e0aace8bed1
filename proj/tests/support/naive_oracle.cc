#include "naive_oracle.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace rsskv::testing {

namespace {

struct Txn {
  TxnId id = 0;
  ProcessId process = 0;
  std::string service;
  TxnType type = TxnType::kReadOnly;
  std::size_t invoke_at = 0;  // event index
  std::optional<std::size_t> respond_at;
  Micros invoke = 0;
  std::optional<Micros> respond;
  bool aborted = false;
  std::vector<WriteRecord> writes;
  std::vector<ReadRecord> reads;
};

struct Op {
  std::size_t txn;  // index into txns
  bool fence = false;
  bool write = false;
  bool whole = false;  // transaction-level unit
  std::vector<ReadRecord> reads;
  std::vector<std::string> writes;
};

class Oracle {
 public:
  Oracle(const std::vector<HistoryEvent>& events, Model model) : model_(model) {
    std::map<TxnId, std::size_t> index;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      if (e.kind == EventKind::kInvoke) {
        index[e.txn] = txns_.size();
        Txn t;
        t.id = e.txn;
        t.process = e.process;
        t.service = e.service;
        t.type = e.type;
        t.invoke_at = i;
        t.invoke = e.time;
        t.writes = e.writes;
        txns_.push_back(t);
      } else if (e.kind == EventKind::kRespond) {
        Txn& t = txns_[index.at(e.txn)];
        t.respond_at = i;
        t.respond = e.time;
        t.aborted = e.aborted;
        t.reads = e.reads;
      }
    }

    // Which transactions take part.
    std::vector<bool> in(txns_.size(), false);
    for (std::size_t i = 0; i < txns_.size(); ++i) {
      in[i] = txns_[i].respond.has_value() && !txns_[i].aborted;
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < txns_.size(); ++i) {
        if (!in[i]) continue;
        for (const auto& r : txns_[i].reads) {
          if (r.writer == kInitialWriter) continue;
          const std::size_t w = index.at(r.writer);
          if (txns_[w].aborted) reads_aborted_ = true;
          if (!in[w] && !txns_[w].aborted) {
            in[w] = true;
            changed = true;
          }
        }
      }
    }

    // Units, and for each transaction the units it owns.
    std::vector<std::vector<std::size_t>> owned(txns_.size());
    for (std::size_t i = 0; i < txns_.size(); ++i) {
      if (!in[i]) continue;
      const Txn& t = txns_[i];
      if (model_ != Model::kRsc || t.type == TxnType::kFence) {
        Op op{i, t.type == TxnType::kFence, t.type == TxnType::kReadWrite, true, t.reads, {}};
        for (const auto& w : t.writes) op.writes.push_back(w.key);
        owned[i].push_back(ops_.size());
        ops_.push_back(op);
        continue;
      }
      for (const auto& r : t.reads) {
        owned[i].push_back(ops_.size());
        ops_.push_back(Op{i, false, false, false, {r}, {}});
      }
      for (const auto& w : t.writes) {
        owned[i].push_back(ops_.size());
        ops_.push_back(Op{i, false, true, false, {}, {w.key}});
      }
    }
    const std::size_t n = ops_.size();

    // Causality: process order, messages, reads-from; then Floyd-Warshall.
    std::vector<std::vector<bool>> hb(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < txns_.size(); ++i) {
      for (std::size_t a = 0; a < owned[i].size(); ++a) {
        for (std::size_t b = a + 1; b < owned[i].size(); ++b) hb[owned[i][a]][owned[i][b]] = true;
      }
    }
    auto txn_edge = [&](std::size_t i, std::size_t j) {
      for (std::size_t a : owned[i]) {
        for (std::size_t b : owned[j]) hb[a][b] = true;
      }
    };
    for (std::size_t i = 0; i < txns_.size(); ++i) {
      for (std::size_t j = 0; j < txns_.size(); ++j) {
        if (i == j || !txns_[i].respond_at) continue;
        if (txns_[i].process == txns_[j].process && *txns_[i].respond_at < txns_[j].invoke_at) {
          txn_edge(i, j);
        }
      }
    }
    std::map<std::uint64_t, std::size_t> send_at;
    for (std::size_t k = 0; k < events.size(); ++k) {
      if (events[k].kind == EventKind::kSend) send_at[events[k].message] = k;
    }
    for (std::size_t k = 0; k < events.size(); ++k) {
      const auto& e = events[k];
      if (e.kind != EventKind::kRecv) continue;
      const std::size_t s = send_at.at(e.message);
      const ProcessId sender = events[s].process;
      for (std::size_t i = 0; i < txns_.size(); ++i) {
        if (txns_[i].process != sender || !txns_[i].respond_at || *txns_[i].respond_at > s) {
          continue;
        }
        for (std::size_t j = 0; j < txns_.size(); ++j) {
          if (txns_[j].process == e.process && txns_[j].invoke_at > k) txn_edge(i, j);
        }
      }
    }
    for (std::size_t b = 0; b < n; ++b) {
      for (const auto& r : ops_[b].reads) {
        for (std::size_t a = 0; a < n; ++a) {
          if (txns_[ops_[a].txn].id == r.writer &&
              std::count(ops_[a].writes.begin(), ops_[a].writes.end(), r.key)) {
            hb[a][b] = true;
          }
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (hb[i][k] && hb[k][j]) hb[i][j] = true;
        }
      }
    }

    before_.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const Txn& ta = txns_[ops_[a].txn];
        const Txn& tb = txns_[ops_[b].txn];
        const bool rt = ta.respond && *ta.respond < tb.invoke;
        bool req = hb[a][b];
        if (model_ == Model::kStrictSerializable) {
          req = req || rt;
        } else if (rt) {
          bool reads_a_write = false;
          for (const auto& r : ops_[b].reads) {
            reads_a_write |= std::count(ops_[a].writes.begin(), ops_[a].writes.end(), r.key) > 0;
          }
          const bool b_reader = !ops_[b].write && !ops_[b].fence;
          if (ops_[a].write && (ops_[b].write || (b_reader && reads_a_write))) req = true;
          if (ops_[a].fence && ta.service == tb.service) req = true;
          // Whatever causally precedes a fence also precedes what follows it.
          if (!req) {
            for (std::size_t f = 0; f < n; ++f) {
              const Txn& tf = txns_[ops_[f].txn];
              if (ops_[f].fence && hb[a][f] && tf.respond && *tf.respond < tb.invoke &&
                  tf.service == tb.service) {
                req = true;
              }
            }
          }
        }
        before_[a][b] = req;
      }
    }
  }

  bool Accepts() {
    if (reads_aborted_) return false;
    placed_.assign(ops_.size(), false);
    return Extend(0);
  }

 private:
  bool Extend(std::size_t depth) {
    if (depth == ops_.size()) return true;
    for (std::size_t u = 0; u < ops_.size(); ++u) {
      if (placed_[u]) continue;
      bool ok = true;
      for (std::size_t a = 0; a < ops_.size() && ok; ++a) {
        if (!placed_[a] && a != u && before_[a][u]) ok = false;
      }
      for (const auto& r : ops_[u].reads) {
        auto it = value_.find(r.key);
        const TxnId v = it == value_.end() ? kInitialWriter : it->second;
        if (v != r.writer) ok = false;
      }
      if (!ok) continue;
      const auto saved = value_;
      for (const auto& k : ops_[u].writes) value_[k] = txns_[ops_[u].txn].id;
      placed_[u] = true;
      if (Extend(depth + 1)) return true;
      placed_[u] = false;
      value_ = saved;
    }
    return false;
  }

  Model model_;
  std::vector<Txn> txns_;
  std::vector<Op> ops_;
  std::vector<std::vector<bool>> before_;
  bool reads_aborted_ = false;
  std::vector<bool> placed_;
  std::map<std::string, TxnId> value_;
};

}  // namespace

bool NaiveAccepts(const std::vector<HistoryEvent>& events, Model model) {
  return Oracle(events, model).Accepts();
}

std::vector<HistoryEvent> RandomHistory(RandomStream& rng, const RandomHistoryOptions& o) {
  const int n = 1 + static_cast<int>(rng.UniformInt(0, o.max_txns - 1));
  auto key = [&] { return "kv/k" + std::to_string(rng.UniformInt(0, o.keys - 1)); };

  struct Plan {
    TxnId id;
    ProcessId process;
    TxnType type;
    std::vector<WriteRecord> writes;
    std::vector<std::string> read_keys;
    bool complete;
    bool aborted;
  };
  std::vector<Plan> plans;
  for (int i = 0; i < n; ++i) {
    Plan p{static_cast<TxnId>(i + 1), 1 + rng.UniformInt(0, o.processes - 1), TxnType::kReadOnly,
           {}, {}, true, false};
    const double r = rng.Uniform01();
    if (r < o.fence_prob) {
      p.type = TxnType::kFence;
    } else if (r < o.fence_prob + 0.5) {
      p.type = TxnType::kReadWrite;
      std::set<std::string> ks{key()};
      if (rng.Bernoulli(0.25)) ks.insert(key());
      std::uint32_t c = 0;
      for (const auto& k : ks) p.writes.push_back({k, c++});
      if (rng.Bernoulli(0.3)) p.read_keys.push_back(key());
    } else {
      std::set<std::string> ks{key()};
      if (rng.Bernoulli(0.5)) ks.insert(key());
      p.read_keys.assign(ks.begin(), ks.end());
    }
    p.complete = !rng.Bernoulli(o.incomplete_prob);
    p.aborted = p.complete && p.type == TxnType::kReadWrite && rng.Bernoulli(o.abort_prob);
    plans.push_back(p);
  }

  // Schedule: each process runs its transactions in order; times are drawn
  // so real-time overlaps are common.
  std::vector<HistoryEvent> timed;
  std::map<ProcessId, Micros> free_at;
  std::map<ProcessId, bool> stuck;  // an incomplete txn blocks the process
  for (const auto& p : plans) {
    if (stuck[p.process]) continue;
    const Micros start = free_at[p.process] + static_cast<Micros>(rng.UniformInt(0, 30));
    const Micros end = start + 1 + static_cast<Micros>(rng.UniformInt(0, 40));
    HistoryEvent inv;
    inv.kind = EventKind::kInvoke;
    inv.txn = p.id;
    inv.process = p.process;
    inv.service = "kv";
    inv.type = p.type;
    inv.time = start;
    inv.writes = p.writes;
    timed.push_back(inv);
    if (!p.complete) {
      stuck[p.process] = true;
      continue;
    }
    HistoryEvent resp = inv;
    resp.kind = EventKind::kRespond;
    resp.time = end;
    resp.writes.clear();
    resp.aborted = p.aborted;
    for (const auto& k : p.read_keys) {
      std::vector<TxnId> candidates{kInitialWriter};
      for (const auto& q : plans) {
        if (q.id == p.id) continue;
        for (const auto& w : q.writes) {
          if (w.key == k) candidates.push_back(q.id);
        }
      }
      resp.reads.push_back({k, candidates[rng.UniformInt(0, candidates.size() - 1)]});
    }
    timed.push_back(resp);
    free_at[p.process] = end + 1;
  }
  // Drop reads of writers that were never invoked.
  std::set<TxnId> invoked;
  for (const auto& e : timed) {
    if (e.kind == EventKind::kInvoke) invoked.insert(e.txn);
  }
  for (auto& e : timed) {
    for (auto& r : e.reads) {
      if (!invoked.contains(r.writer)) r.writer = kInitialWriter;
    }
  }
  // Messages between processes at random instants.
  std::uint64_t next_message = 1;
  for (int i = 0; i < 3; ++i) {
    if (!rng.Bernoulli(o.message_prob * 3)) continue;
    const ProcessId from = 1 + rng.UniformInt(0, o.processes - 1);
    const ProcessId to = 1 + rng.UniformInt(0, o.processes - 1);
    if (from == to) continue;
    const Micros sent = static_cast<Micros>(rng.UniformInt(0, 200));
    HistoryEvent s;
    s.kind = EventKind::kSend;
    s.process = from;
    s.time = sent;
    s.message = next_message++;
    HistoryEvent r = s;
    r.kind = EventKind::kRecv;
    r.process = to;
    r.time = sent + 1 + static_cast<Micros>(rng.UniformInt(0, 30));
    timed.push_back(s);
    timed.push_back(r);
  }
  // Order by time; at equal times sends go before receives, responses
  // before invokes of the same process.
  auto rank = [](const HistoryEvent& e) {
    switch (e.kind) {
      case EventKind::kRespond:
        return 0;
      case EventKind::kSend:
        return 1;
      case EventKind::kRecv:
        return 2;
      case EventKind::kInvoke:
        return 3;
    }
    return 4;
  };
  std::stable_sort(timed.begin(), timed.end(), [&](const HistoryEvent& a, const HistoryEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    return rank(a) < rank(b);
  });
  return timed;
}

}  // namespace rsskv::testing
