#include "rsskv/scenarios.h"

#include <map>
#include <memory>
#include <stdexcept>

#include "rsskv/client.h"
#include "rsskv/deployment.h"
#include "rsskv/librss.h"

namespace rsskv {

namespace {

HistoryEvent Ev(EventKind kind, TxnId txn, ProcessId p, TxnType type, Micros t) {
  HistoryEvent e;
  e.kind = kind;
  e.txn = txn;
  e.process = p;
  e.service = "kv";
  e.type = type;
  e.time = t;
  return e;
}

// Smallest key >= 1 that the service places on `shard`.
Key KeyOn(const KvService& service, ShardId shard, Key after = 0) {
  for (Key k = after + 1;; ++k) {
    if (service.ShardOf(k) == shard) return k;
  }
}

constexpr RegionId kCa = 0;
constexpr RegionId kVa = 1;
constexpr RegionId kIr = 2;
constexpr RegionId kAp = 3;

ServiceConfig TwoShardService(const std::string& name, RegionId first, RegionId second) {
  ServiceConfig cfg;
  cfg.name = name;
  cfg.mode = ConsistencyMode::kRss;
  cfg.leader_regions = {first, second};
  cfg.replica_regions = {kCa, kVa, kIr};
  return cfg;
}

// Small per-seed start offset so runs differ beyond network jitter.
Micros StartOffset(std::uint64_t seed, std::string_view tag) {
  return static_cast<Micros>(HashCombine(seed, HashString(tag)) % (2 * kMillis));
}

void RecordMessage(Deployment& d, EventKind kind, ProcessId p, std::uint64_t id) {
  HistoryEvent e;
  e.kind = kind;
  e.process = p;
  e.time = d.sim().now();
  e.message = id;
  d.Record(std::move(e));
}

void Finish(Deployment& d, const RunResult& run, bool done, ScenarioResult& out) {
  out.completed = done && run.status == RunStatus::kConditionMet;
  if (!out.completed) {
    out.detail = "scenario did not complete";
    for (const auto& b : run.blocked) out.detail += "; " + b;
  }
  // Let in-flight decisions reach every participant before auditing the
  // shards' stores.
  d.sim().RunUntil(d.sim().now() + 10 * kSeconds);
  out.history = d.history().events();
  out.audit = RunAudits(d);
  out.verdict = Check(out.history, Model::kRss, CheckOptions{});
}

}  // namespace

std::vector<HistoryEvent> LitmusHistory() {
  const Micros ms = kMillis;
  std::vector<HistoryEvent> h;
  auto w = Ev(EventKind::kInvoke, 1, 1, TxnType::kReadWrite, 0);
  w.writes = {{"kv/x", 0}, {"kv/y", 1}};
  h.push_back(w);
  h.push_back(Ev(EventKind::kInvoke, 2, 2, TxnType::kReadOnly, 40 * ms));
  auto r1 = Ev(EventKind::kRespond, 2, 2, TxnType::kReadOnly, 50 * ms);
  r1.reads = {{"kv/x", 1}};
  h.push_back(r1);
  h.push_back(Ev(EventKind::kInvoke, 3, 3, TxnType::kReadOnly, 60 * ms));
  auto r2 = Ev(EventKind::kRespond, 3, 3, TxnType::kReadOnly, 70 * ms);
  r2.reads = {{"kv/y", kInitialWriter}};
  h.push_back(r2);
  h.push_back(Ev(EventKind::kRespond, 1, 1, TxnType::kReadWrite, 100 * ms));
  return h;
}

LatencyMatrix WithFarRegion(const LatencyMatrix& base, Micros rtt) {
  std::vector<std::string> regions = base.regions();
  regions.push_back("AP");
  const std::size_t n = regions.size();
  std::vector<std::vector<Micros>> m(n, std::vector<Micros>(n, rtt));
  for (std::size_t a = 0; a + 1 < n; ++a) {
    for (std::size_t b = 0; b + 1 < n; ++b) {
      m[a][b] = base.Rtt(static_cast<RegionId>(a), static_cast<RegionId>(b));
    }
  }
  m[n - 1][n - 1] = base.Rtt(0, 0);
  return LatencyMatrix(std::move(regions), std::move(m));
}

ScenarioResult RunFenceScenario(std::uint64_t seed, const FenceScenarioOptions& options) {
  Deployment d(seed, WithFarRegion(LatencyMatrix::ThreeRegionDefault(), 200 * kMillis));
  KvService& kv = d.AddService(TwoShardService("kv", kCa, kIr));
  const Key x = KeyOn(kv, 0);
  const Key y = KeyOn(kv, 1);

  KvClient writer(d, kv, d.NewProcess(), kAp);
  KvClient observer(d, kv, d.NewProcess(), kCa);
  KvClient reader(d, kv, d.NewProcess(), kVa);

  ScenarioResult out;
  TxnId write_txn = 0;
  std::map<Key, Version> seen;
  bool done = false;

  reader.set_signal_handler([&](NodeId, const AppSignal& s) {
    RecordMessage(d, EventKind::kRecv, reader.process(), std::stoull(s.payload));
    reader.ReadOnly({x, y}, [&](const RoResult& r) {
      seen = r.values;
      done = true;
    });
  });
  auto signal = [&](KvClient& from) {
    const std::uint64_t id = d.NextMessageId();
    RecordMessage(d, EventKind::kSend, from.process(), id);
    d.net().Send(from.node(), reader.node(), AppSignal{std::to_string(id)});
  };
  auto fence_then_signal = [&](KvClient& from) {
    if (options.fence) {
      ++out.fences;
      from.Fence([&] { signal(from); });
    } else {
      signal(from);
    }
  };

  if (options.signal_from_observer) {
    bool triggered = false;
    kv.set_apply_observer([&](ShardId shard, TxnId, Timestamp) {
      if (shard != 0 || triggered) return;
      triggered = true;
      observer.ReadOnly({x}, [&](const RoResult&) { fence_then_signal(observer); });
    });
  }
  d.sim().Schedule(StartOffset(seed, "writer"), [&] {
    writer.ReadWrite({}, {x, y}, [&](const RwResult& r) {
      if (!r.committed) throw std::logic_error("fence scenario writer aborted");
      write_txn = r.txn;
      if (!options.signal_from_observer) fence_then_signal(writer);
    });
  });
  const RunResult run = d.sim().RunUntil([&] { return done && !writer.busy(); }, 60 * kSeconds);
  out.observed = done && write_txn != 0 && seen.at(x).value.writer == write_txn &&
                 seen.at(y).value.writer == write_txn;
  Finish(d, run, done, out);
  return out;
}

ScenarioResult RunCompositionScenario(std::uint64_t seed, bool use_librss) {
  Deployment d(seed, WithFarRegion(LatencyMatrix::ThreeRegionDefault(), 200 * kMillis));
  KvService& a = d.AddService(TwoShardService("A", kCa, kIr));
  KvService& b = d.AddService(TwoShardService("B", kIr, kCa));
  const Key x1 = KeyOn(a, 0), x2 = KeyOn(a, 1);
  const Key y1 = KeyOn(b, 0), y2 = KeyOn(b, 1);

  KvClient wa(d, a, d.NewProcess(), kAp);
  KvClient wb(d, b, d.NewProcess(), kAp);

  // A reader process uses one client per service and one registry.
  struct Reader {
    ProcessId process;
    std::unique_ptr<KvClient> at_a, at_b;
    ServiceRegistry registry;
    CausalContext ctx;
    bool done = false;
  };
  auto make_reader = [&](RegionId region) {
    auto r = std::make_unique<Reader>();
    r->process = d.NewProcess();
    r->at_a = std::make_unique<KvClient>(d, a, r->process, region);
    r->at_b = std::make_unique<KvClient>(d, b, r->process, region);
    Reader* raw = r.get();
    r->registry.RegisterService("A", [raw](std::function<void()> f) { raw->at_a->Fence(f); });
    r->registry.RegisterService("B", [raw](std::function<void()> f) { raw->at_b->Fence(f); });
    return r;
  };
  auto p1 = make_reader(kCa);
  auto p2 = make_reader(kIr);

  ScenarioResult out;
  // Reads `key` through `client`, going through the registry when enabled.
  auto read = [&](Reader& r, KvClient& client, Key key, std::function<void()> next) {
    auto go = [&r, &client, key, next = std::move(next)](bool) {
      client.ReadOnly({key}, [&r, &client, next](const RoResult&) {
        r.ctx.t_min = std::max(r.ctx.t_min, client.t_min());
        next();
      });
    };
    if (use_librss) {
      r.registry.StartTransaction(r.ctx, client.service().name(), std::move(go));
    } else {
      go(false);
    }
  };

  bool a_triggered = false, b_triggered = false;
  a.set_apply_observer([&](ShardId shard, TxnId, Timestamp) {
    if (shard != 0 || a_triggered) return;
    a_triggered = true;
    read(*p1, *p1->at_a, x1, [&] { read(*p1, *p1->at_b, y2, [&] { p1->done = true; }); });
  });
  b.set_apply_observer([&](ShardId shard, TxnId, Timestamp) {
    if (shard != 0 || b_triggered) return;
    b_triggered = true;
    read(*p2, *p2->at_b, y1, [&] { read(*p2, *p2->at_a, x2, [&] { p2->done = true; }); });
  });

  d.sim().Schedule(StartOffset(seed, "A"), [&] {
    wa.ReadWrite({}, {x1, x2}, [](const RwResult&) {});
  });
  d.sim().Schedule(StartOffset(seed, "B"), [&] {
    wb.ReadWrite({}, {y1, y2}, [](const RwResult&) {});
  });
  const RunResult run = d.sim().RunUntil(
      [&] { return p1->done && p2->done && !wa.busy() && !wb.busy(); }, 60 * kSeconds);
  out.fences = p1->registry.fences_run() + p2->registry.fences_run();
  Finish(d, run, p1->done && p2->done, out);
  return out;
}

}  // namespace rsskv
