// rsskv: run simulated experiments and check histories.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsskv/checker.h"
#include "rsskv/experiment.h"
#include "rsskv/history.h"
#include "rsskv/scenarios.h"

namespace {

using namespace rsskv;

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<RegionId> Regions(const LatencyMatrix& m, const std::string& list) {
  std::vector<RegionId> out;
  for (const auto& name : SplitList(list)) out.push_back(m.Find(name));
  return out;
}

struct RunFlags {
  std::string mode = "rss";
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  Micros epsilon_us = 10000;
  std::string matrix_file;
  double jitter = 0.05;
  int shards = 0;
  std::string leader_placement;
  std::size_t replicas = 3;
  std::string client_regions;
  double fence_ms = 0;
  bool no_lease = false;
  bool no_skipped_writes = false;
  bool no_t_ee_adjust = false;
  double skew = 0.9;
  std::uint64_t num_keys = 10000;
  std::string client_model = "partly-open";
  double lambda = 100;
  double stay_prob = 0.9;
  double think_ms = 0;
  int closed_clients = 3;
  int txns_per_client = 0;
  double duration_s = 10;
  std::uint64_t history_sample = 1;
  std::string check = "none";
  std::size_t cap = 12;
};

int Run(const RunFlags& f) {
  RunConfig cfg;
  cfg.mode = ParseMode(f.mode);
  cfg.seed = f.seed;
  if (!f.matrix_file.empty()) cfg.matrix = LatencyMatrix::LoadFile(f.matrix_file);
  if (!f.leader_placement.empty()) {
    cfg.leader_regions = Regions(cfg.matrix, f.leader_placement);
  } else {
    cfg.leader_regions.clear();
    const int n = f.shards > 0 ? f.shards : static_cast<int>(cfg.matrix.size());
    for (int i = 0; i < n; ++i) {
      cfg.leader_regions.push_back(static_cast<RegionId>(i % cfg.matrix.size()));
    }
  }
  if (f.shards > 0 && cfg.leader_regions.size() != static_cast<std::size_t>(f.shards)) {
    throw CLI::ValidationError("--leader-placement must name one region per shard");
  }
  if (!f.client_regions.empty()) cfg.client_regions = Regions(cfg.matrix, f.client_regions);
  cfg.replicas_per_shard = f.replicas;
  cfg.leader_lease = !f.no_lease;
  cfg.jitter_fraction = f.jitter;
  cfg.epsilon = f.epsilon_us;
  cfg.fence_bound = MillisToMicros(f.fence_ms);
  cfg.skipped_writes_in_fast_reply = !f.no_skipped_writes;
  cfg.adjust_t_ee_for_blocking = !f.no_t_ee_adjust;
  cfg.workload.skew = f.skew;
  cfg.workload.num_keys = f.num_keys;
  cfg.client_model = ParseClientModel(f.client_model);
  cfg.lambda = f.lambda;
  cfg.stay_prob = f.stay_prob;
  cfg.think = MillisToMicros(f.think_ms);
  cfg.closed_clients = f.closed_clients;
  cfg.txns_per_client = f.txns_per_client;
  cfg.duration = static_cast<Micros>(std::llround(f.duration_s * kSeconds));
  cfg.history_sample = f.history_sample;

  const RunOutput out = RunExperiment(cfg);
  std::filesystem::create_directories(f.out_dir);
  WriteOutputs(out, f.out_dir);

  const LatencySummary summary = out.Summary();
  WriteSummaryCsv(std::cout, summary);
  std::cout << "# sim_end_ms=" << MicrosToMillis(out.sim_end) << " events=" << out.events
            << " wall_s=" << out.wall_seconds << " fence_L_ms=" << MicrosToMillis(out.fence_bound)
            << " bound_violations=" << out.bound_violations.size()
            << " audit=" << (out.audit.ok() ? "ok" : "FAILED") << "\n";
  for (const auto& v : out.audit.violations) std::cerr << "audit: " << v << "\n";
  if (!out.completed()) {
    std::cerr << "run did not drain";
    if (out.status == RunStatus::kDeadlock) std::cerr << " (deadlock)";
    std::cerr << "\n";
    for (const auto& b : out.blocked) std::cerr << "  " << b << "\n";
    return 3;
  }

  int rc = out.audit.ok() ? 0 : 1;
  if (f.check == "litmus") {
    const auto h = LitmusHistory();
    const bool ok = Check(h, Model::kRss).kind == VerdictKind::kAccept &&
                    Check(h, Model::kStrictSerializable).kind == VerdictKind::kReject;
    std::cout << "# litmus " << (ok ? "ok" : "FAILED") << "\n";
    if (!ok) rc = 1;
  } else if (f.check == "full-small") {
    const Model model = cfg.mode == ConsistencyMode::kRss ? Model::kRss : Model::kStrictSerializable;
    CheckOptions opts;
    opts.max_units = f.cap;
    const Verdict v = Check(out.history, model, opts);
    std::cout << "# check " << ModelName(model) << " " << VerdictName(v.kind) << " units=" << v.units
              << "\n";
    if (v.kind == VerdictKind::kReject) rc = 1;
  }
  return rc;
}

int CheckCommand(const std::string& model_name, const std::string& input, std::size_t cap,
                 double time_limit) {
  const Model model = ParseModel(model_name);
  const auto events = LoadHistoryFile(input);
  CheckOptions opts;
  opts.max_units = cap;
  opts.time_limit_seconds = time_limit;
  const Verdict v = Check(events, model, opts);
  std::cout << VerdictName(v.kind) << " model=" << ModelName(model) << " units=" << v.units
            << " states=" << v.states_explored << "\n";
  if (!v.note.empty()) std::cout << "note: " << v.note << "\n";
  if (v.kind == VerdictKind::kAccept) {
    std::cout << "witness:";
    for (const auto& l : v.witness) std::cout << " " << l;
    std::cout << "\n";
    return 0;
  }
  return v.kind == VerdictKind::kReject ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated multi-region transactional key-value store and history checker"};
  app.require_subcommand(1);

  RunFlags f;
  auto* run = app.add_subcommand("run", "Run one simulated experiment");
  run->add_option("--mode", f.mode, "spanner-ss | spanner-rss (or ss | rss)")->required();
  run->add_option("--seed", f.seed);
  run->add_option("--out-dir", f.out_dir);
  run->add_option("--tt-epsilon-us", f.epsilon_us, "TrueTime uncertainty bound")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--latency-matrix", f.matrix_file, "RTT table in ms")->check(CLI::ExistingFile);
  run->add_option("--jitter", f.jitter, "jitter as a fraction of one-way latency")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--shards", f.shards);
  run->add_option("--leader-placement", f.leader_placement, "comma-separated region per shard");
  run->add_option("--replicas-per-shard", f.replicas)->check(CLI::PositiveNumber);
  run->add_option("--client-regions", f.client_regions, "comma-separated client regions");
  run->add_option("--fence-L", f.fence_ms, "fence bound in ms (0: derived)");
  run->add_flag("--no-leader-lease", f.no_lease);
  run->add_flag("--no-skipped-writes", f.no_skipped_writes,
                "omit skipped writes from fast replies");
  run->add_flag("--no-t-ee-adjust", f.no_t_ee_adjust, "do not extend t_ee by blocking time");
  run->add_option("--skew", f.skew)->check(CLI::Range(0.0, 1.0));
  run->add_option("--num-keys", f.num_keys)->check(CLI::PositiveNumber);
  run->add_option("--client-model", f.client_model, "partly-open | closed");
  run->add_option("--lambda", f.lambda, "session arrivals per second");
  run->add_option("--stay-prob", f.stay_prob)->check(CLI::Range(0.0, 1.0));
  run->add_option("--think-ms", f.think_ms);
  run->add_option("--closed-clients", f.closed_clients);
  run->add_option("--txns-per-client", f.txns_per_client);
  run->add_option("--duration", f.duration_s, "arrival window in seconds");
  run->add_option("--history-sample", f.history_sample, "record every n-th process")
      ->check(CLI::PositiveNumber);
  run->add_option("--check", f.check, "none | litmus | full-small")
      ->check(CLI::IsMember({"none", "litmus", "full-small"}));
  run->add_option("--cap", f.cap, "unit cap for full-small");

  std::string model = "rss", input;
  std::size_t cap = 12;
  double time_limit = 5;
  auto* check = app.add_subcommand("check", "Check a history file against a consistency model");
  check->add_option("--model", model, "rss | ss | rsc")->required();
  check->add_option("--input", input)->required()->check(CLI::ExistingFile);
  check->add_option("--cap", cap, "maximum units searched");
  check->add_option("--time-limit", time_limit, "seconds before giving up");

  std::string litmus_out;
  auto* litmus = app.add_subcommand("litmus", "Write the two-reader litmus history");
  litmus->add_option("--output", litmus_out)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return Run(f);
    if (*check) return CheckCommand(model, input, cap, time_limit);
    if (*litmus) {
      SaveHistoryFile(litmus_out, LitmusHistory());
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
