#include "rsskv/experiment.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>

#include "rsskv/client.h"
#include "rsskv/deployment.h"

namespace rsskv {

ClientModel ParseClientModel(const std::string& name) {
  if (name == "partly-open") return ClientModel::kPartlyOpen;
  if (name == "closed") return ClientModel::kClosed;
  throw std::invalid_argument("unknown client model '" + name +
                              "' (expected partly-open or closed)");
}

std::vector<TxnSample> RunOutput::Select(bool read_only) const {
  std::vector<TxnSample> out;
  for (const auto& s : samples) {
    if (s.read_only == read_only) out.push_back(s);
  }
  std::sort(out.begin(), out.end(),
            [](const TxnSample& a, const TxnSample& b) { return a.seq < b.seq; });
  return out;
}

std::uint64_t RunOutput::ReadWriteMessages() const {
  std::uint64_t n = 0;
  for (const auto& [name, count] : message_counts) {
    if (!IsReadOnlyMessage(name)) n += count;
  }
  return n;
}

LatencySummary RunOutput::Summary() const {
  LatencySummary summary;
  std::map<std::string, std::vector<Micros>> by_type;
  std::map<std::string, std::uint64_t> aborts;
  std::vector<Micros> rw, ro;
  std::uint64_t rw_aborts = 0;
  for (const auto& s : samples) {
    const std::uint64_t a = static_cast<std::uint64_t>(s.attempts - (s.committed ? 1 : 0));
    aborts[s.type] += a;
    if (!s.read_only) rw_aborts += a;
    if (!s.committed) continue;
    by_type[s.type].push_back(s.latency);
    (s.read_only ? ro : rw).push_back(s.latency);
  }
  for (RetwisTxn t : {RetwisTxn::kAddUser, RetwisTxn::kFollow, RetwisTxn::kPostTweet,
                      RetwisTxn::kLoadTimeline}) {
    const std::string name = RetwisName(t);
    if (auto row = Summarize(name, by_type[name], aborts[name])) summary.rows.push_back(*row);
  }
  if (auto row = Summarize("rw", rw, rw_aborts)) summary.rows.push_back(*row);
  if (auto row = Summarize("ro", ro, 0)) summary.rows.push_back(*row);
  summary.messages = message_counts;
  return summary;
}

namespace {

struct Session {
  std::uint64_t index = 0;
  std::uint32_t count = 0;
  std::unique_ptr<KvClient> client;
  RandomStream rng{0};
};

}  // namespace

RunOutput RunExperiment(const RunConfig& config) {
  const auto wall_start = std::chrono::steady_clock::now();
  if (config.client_model == ClientModel::kPartlyOpen &&
      (config.stay_prob < 0 || config.stay_prob >= 1)) {
    throw std::invalid_argument("stay probability must be in [0, 1)");
  }
  if (config.client_model == ClientModel::kPartlyOpen && config.lambda <= 0) {
    throw std::invalid_argument("lambda must be positive");
  }
  if (config.client_model == ClientModel::kClosed && config.closed_clients <= 0) {
    throw std::invalid_argument("closed client count must be positive");
  }

  Deployment d(config.seed, config.matrix, TrueTimeConfig{config.epsilon},
               NetworkConfig{config.jitter_fraction});
  ServiceConfig sc;
  sc.mode = config.mode;
  sc.leader_regions = config.leader_regions;
  sc.replicas_per_shard = config.replicas_per_shard;
  sc.leader_lease = config.leader_lease;
  sc.skipped_writes_in_fast_reply = config.skipped_writes_in_fast_reply;
  sc.adjust_t_ee_for_blocking = config.adjust_t_ee_for_blocking;
  sc.fence_bound = config.fence_bound;
  sc.max_retries = config.max_retries;
  KvService& svc = d.AddService(sc);
  d.set_history_enabled(config.record_history);
  if (config.history_sample > 1) {
    d.set_history_filter(
        [n = config.history_sample](ProcessId pid) { return pid % n == 0; });
  }

  std::vector<RegionId> regions = config.client_regions;
  if (regions.empty()) {
    for (RegionId r : config.leader_regions) {
      if (std::find(regions.begin(), regions.end(), r) == regions.end()) regions.push_back(r);
    }
  }

  const RetwisGenerator generator(config.workload);
  RunOutput out;
  std::map<std::uint64_t, std::unique_ptr<Session>> active;
  std::uint64_t next_session = 0;
  bool arrivals_done = false;
  Simulator& sim = d.sim();

  std::function<void(Session*)> next_txn;
  auto end_session = [&](Session* s) {
    const std::uint64_t index = s->index;
    sim.Schedule(0, [&active, index]() { active.erase(index); });
  };
  auto after_txn = [&](Session* s) {
    if (config.client_model == ClientModel::kPartlyOpen && !s->rng.Bernoulli(config.stay_prob)) {
      end_session(s);
      return;
    }
    sim.Schedule(config.think, [&next_txn, s]() { next_txn(s); });
  };
  next_txn = [&](Session* s) {
    if (config.client_model == ClientModel::kClosed) {
      const bool done = config.txns_per_client > 0
                            ? s->count >= static_cast<std::uint32_t>(config.txns_per_client)
                            : sim.now() >= config.duration;
      if (done) {
        end_session(s);
        return;
      }
    }
    const TxnSpec spec = generator.Next(s->rng);
    TxnSample sample;
    sample.seq = (s->index << 32) | s->count++;
    sample.type = RetwisName(spec.type);
    sample.read_only = spec.read_only;
    sample.start = sim.now();
    if (spec.read_only) {
      s->client->ReadOnly(spec.reads, [&, s, sample](const RoResult& r) mutable {
        sample.latency = r.latency;
        sample.waited_for_slow_reply = r.waited_for_slow_reply;
        out.samples.push_back(sample);
        after_txn(s);
      });
    } else {
      s->client->ReadWrite(spec.reads, spec.writes, [&, s, sample](const RwResult& r) mutable {
        sample.latency = r.latency;
        sample.committed = r.committed;
        sample.attempts = r.attempts;
        out.aborted_attempts += static_cast<std::uint64_t>(r.attempts - (r.committed ? 1 : 0));
        out.samples.push_back(sample);
        after_txn(s);
      });
    }
  };
  auto start_session = [&]() {
    auto s = std::make_unique<Session>();
    s->index = next_session++;
    s->rng = sim.Stream(HashCombine(HashString("session"), s->index));
    s->client = std::make_unique<KvClient>(d, svc, d.NewProcess(),
                                           regions[s->index % regions.size()]);
    Session* raw = s.get();
    active.emplace(raw->index, std::move(s));
    next_txn(raw);
  };

  std::function<void()> arrive;
  if (config.client_model == ClientModel::kClosed) {
    for (int i = 0; i < config.closed_clients; ++i) start_session();
    arrivals_done = true;
  } else {
    auto arrivals = std::make_shared<RandomStream>(sim.Stream("arrivals"));
    auto gap = [arrivals, lambda = config.lambda]() {
      return static_cast<Micros>(arrivals->Exponential(lambda) * kSeconds);
    };
    arrive = [&, gap]() {
      if (sim.now() >= config.duration) {
        arrivals_done = true;
        return;
      }
      start_session();
      sim.Schedule(gap(), arrive);
    };
    sim.Schedule(gap(), arrive);
  }
  const RunResult r = sim.RunUntil([&]() { return arrivals_done && active.empty(); },
                                   config.duration + config.drain_limit);
  out.status = r.status;
  out.blocked = r.blocked;

  out.sim_end = sim.now();
  out.events = sim.events_processed();
  out.trace_hash = sim.trace_hash();
  out.fence_bound = svc.fence_bound();
  for (const auto& [name, count] : d.net().counts()) out.message_counts[std::string(name)] = count;
  out.history = d.history().events();
  out.audit = RunAudits(d);
  out.bound_violations = d.bound_violations();
  // Sessions still running hold clients that reference the deployment.
  active.clear();
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return out;
}

void WriteOutputs(const RunOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  SaveHistoryFile((std::filesystem::path(dir) / "history.log").string(), out.history);
  const LatencySummary summary = out.Summary();
  {
    std::ofstream f(std::filesystem::path(dir) / "summary.csv");
    if (!f) throw std::runtime_error("cannot write summary.csv in " + dir);
    WriteSummaryCsv(f, summary);
  }
  {
    std::ofstream f(std::filesystem::path(dir) / "messages.csv");
    if (!f) throw std::runtime_error("cannot write messages.csv in " + dir);
    WriteMessageCsv(f, summary);
  }
}

}  // namespace rsskv
