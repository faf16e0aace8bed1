#ifndef RSSKV_EXPERIMENT_H_
#define RSSKV_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rsskv/audit.h"
#include "rsskv/history.h"
#include "rsskv/latency_matrix.h"
#include "rsskv/simulator.h"
#include "rsskv/summary.h"
#include "rsskv/workload.h"

namespace rsskv {

enum class ClientModel { kPartlyOpen, kClosed };

ClientModel ParseClientModel(const std::string& name);

struct RunConfig {
  ConsistencyMode mode = ConsistencyMode::kRss;
  std::uint64_t seed = 1;

  LatencyMatrix matrix = LatencyMatrix::ThreeRegionDefault();
  // Leader region of each shard; shard count is its size.
  std::vector<RegionId> leader_regions = {0, 1, 2};
  std::size_t replicas_per_shard = 3;
  bool leader_lease = true;
  double jitter_fraction = 0.05;
  Micros epsilon = 10 * kMillis;
  Micros fence_bound = 0;  // 0: default
  bool skipped_writes_in_fast_reply = true;
  bool adjust_t_ee_for_blocking = true;
  int max_retries = 20;

  WorkloadConfig workload;
  ClientModel client_model = ClientModel::kPartlyOpen;
  // Partly-open: Poisson session arrivals at `lambda` per second; after each
  // transaction a session stays with probability `stay_prob`, then thinks
  // for `think`.
  double lambda = 100;
  double stay_prob = 0.9;
  Micros think = 0;
  // Closed: `closed_clients` sessions, each running `txns_per_client`
  // transactions back to back (0: until the arrival window closes).
  int closed_clients = 3;
  int txns_per_client = 0;
  // Regions clients are placed in, round-robin. Empty: every leader region.
  std::vector<RegionId> client_regions;

  // New transactions start only within [0, duration); the run then drains.
  Micros duration = 10 * kSeconds;
  Micros drain_limit = 60 * kSeconds;

  bool record_history = true;
  // Keep the history of every n-th process only.
  std::uint64_t history_sample = 1;
};

struct TxnSample {
  std::uint64_t seq = 0;  // session index << 32 | index within session
  std::string type;
  bool read_only = false;
  bool committed = true;
  int attempts = 1;
  Micros start = 0;
  Micros latency = 0;
  bool waited_for_slow_reply = false;
};

struct RunOutput {
  RunStatus status = RunStatus::kHorizonReached;
  std::vector<std::string> blocked;
  Micros sim_end = 0;
  std::uint64_t events = 0;
  std::uint64_t trace_hash = 0;
  double wall_seconds = 0;
  Micros fence_bound = 0;

  std::vector<TxnSample> samples;
  std::map<std::string, std::uint64_t> message_counts;
  std::vector<HistoryEvent> history;
  AuditReport audit;
  std::vector<std::string> bound_violations;
  std::uint64_t aborted_attempts = 0;

  bool completed() const { return status == RunStatus::kConditionMet; }
  // Samples of one kind, in seq order.
  std::vector<TxnSample> Select(bool read_only) const;
  std::uint64_t ReadWriteMessages() const;
  LatencySummary Summary() const;
};

// Runs one simulation. Deterministic in (config, seed).
RunOutput RunExperiment(const RunConfig& config);

// Writes history.log, summary.csv and messages.csv into `dir`.
void WriteOutputs(const RunOutput& out, const std::string& dir);

}  // namespace rsskv

#endif  // RSSKV_EXPERIMENT_H_
