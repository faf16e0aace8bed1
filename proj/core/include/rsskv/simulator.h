#ifndef RSSKV_SIMULATOR_H_
#define RSSKV_SIMULATOR_H_

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rsskv/timestamp.h"

namespace rsskv {

using NodeId = std::uint32_t;
using TimerId = std::uint64_t;

constexpr NodeId kNoNode = 0xffffffffu;

std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t HashCombine(std::uint64_t seed, std::uint64_t value);
std::uint64_t HashString(std::string_view s);

// A deterministic pseudo-random stream derived from the simulation seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double Uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  std::uint64_t UniformInt(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
  }
  double Exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
  bool Bernoulli(double p) { return Uniform01() < p; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

enum class RunStatus { kConditionMet, kHorizonReached, kDeadlock };

struct RunResult {
  RunStatus status = RunStatus::kHorizonReached;
  Micros final_time = 0;
  // Filled on deadlock: one line per blocked waiter, as reported by the
  // registered reporters.
  std::vector<std::string> blocked;
};

// Single-threaded discrete-event loop. Owns simulated time and the seed from
// which every random stream in a run is derived. Events with equal fire time
// run in insertion order.
class Simulator {
 public:
  using Callback = std::function<void()>;
  using WaiterReporter = std::function<void(std::vector<std::string>&)>;

  explicit Simulator(std::uint64_t seed);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  Micros now() const { return now_; }
  std::uint64_t seed() const { return seed_; }

  // Fires `fn` at now + delay (delay >= 0). Same-time events already queued
  // run first.
  TimerId Schedule(Micros delay, Callback fn, NodeId node = kNoNode);
  TimerId ScheduleAt(Micros at, Callback fn, NodeId node = kNoNode);
  // Returns false if the timer already fired or was cancelled.
  bool Cancel(TimerId id);

  // Runs until the queue drains or the horizon passes; time ends at the
  // horizon unless the queue still has later events.
  RunResult RunUntil(Micros horizon);
  // Runs until `done()` holds (checked after every event). An empty queue
  // before that is a deadlock; the reporters describe who is stuck.
  RunResult RunUntil(const std::function<bool()>& done, Micros horizon);

  void AddWaiterReporter(WaiterReporter reporter);
  std::vector<std::string> DescribeBlocked() const;

  // Independent stream for a named purpose; same (seed, tag) -> same stream.
  RandomStream Stream(std::string_view tag) const;
  RandomStream Stream(std::uint64_t tag) const;

  std::size_t pending() const { return callbacks_.size(); }
  std::uint64_t events_processed() const { return events_processed_; }
  // Rolling hash of (fire time, node) of every dispatched event.
  std::uint64_t trace_hash() const { return trace_hash_; }

 private:
  struct Entry {
    Micros at;
    std::uint64_t seq;
    bool operator>(const Entry& o) const {
      return at != o.at ? at > o.at : seq > o.seq;
    }
  };
  struct Pending {
    Callback fn;
    NodeId node;
  };

  bool Step();

  std::uint64_t seed_;
  Micros now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue_;
  std::unordered_map<std::uint64_t, Pending> callbacks_;
  std::vector<WaiterReporter> reporters_;
  std::uint64_t events_processed_ = 0;
  std::uint64_t trace_hash_ = 0;
};

}  // namespace rsskv

#endif  // RSSKV_SIMULATOR_H_
