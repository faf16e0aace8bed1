#include "rsskv/simulator.h"

#include <stdexcept>

namespace rsskv {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashCombine(std::uint64_t seed, std::uint64_t value) {
  return SplitMix64(seed ^ (SplitMix64(value) + 0x9e3779b97f4a7c15ULL + (seed << 6) +
                            (seed >> 2)));
}

std::uint64_t HashString(std::string_view s) {
  // FNV-1a
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Simulator::Simulator(std::uint64_t seed) : seed_(seed) {}

TimerId Simulator::Schedule(Micros delay, Callback fn, NodeId node) {
  if (delay < 0) throw std::invalid_argument("negative timer delay");
  return ScheduleAt(now_ + delay, std::move(fn), node);
}

TimerId Simulator::ScheduleAt(Micros at, Callback fn, NodeId node) {
  if (at < now_) throw std::invalid_argument("cannot schedule in the past");
  const std::uint64_t seq = next_seq_++;
  queue_.push(Entry{at, seq});
  callbacks_.emplace(seq, Pending{std::move(fn), node});
  return seq;
}

bool Simulator::Cancel(TimerId id) { return callbacks_.erase(id) > 0; }

bool Simulator::Step() {
  while (!queue_.empty()) {
    const Entry top = queue_.top();
    queue_.pop();
    auto it = callbacks_.find(top.seq);
    if (it == callbacks_.end()) continue;  // cancelled
    Pending pending = std::move(it->second);
    callbacks_.erase(it);
    now_ = top.at;
    ++events_processed_;
    trace_hash_ = HashCombine(trace_hash_, HashCombine(static_cast<std::uint64_t>(top.at),
                                                       pending.node));
    pending.fn();
    return true;
  }
  return false;
}

RunResult Simulator::RunUntil(Micros horizon) {
  while (!queue_.empty()) {
    // Skip cancelled heads so the horizon test sees a live event.
    while (!queue_.empty() && !callbacks_.contains(queue_.top().seq)) queue_.pop();
    if (queue_.empty() || queue_.top().at > horizon) break;
    Step();
  }
  if (now_ < horizon) now_ = horizon;
  return RunResult{RunStatus::kHorizonReached, now_, {}};
}

RunResult Simulator::RunUntil(const std::function<bool()>& done, Micros horizon) {
  while (!done()) {
    while (!queue_.empty() && !callbacks_.contains(queue_.top().seq)) queue_.pop();
    if (queue_.empty()) {
      return RunResult{RunStatus::kDeadlock, now_, DescribeBlocked()};
    }
    if (queue_.top().at > horizon) {
      now_ = horizon;
      return RunResult{RunStatus::kHorizonReached, now_, {}};
    }
    Step();
  }
  return RunResult{RunStatus::kConditionMet, now_, {}};
}

void Simulator::AddWaiterReporter(WaiterReporter reporter) {
  reporters_.push_back(std::move(reporter));
}

std::vector<std::string> Simulator::DescribeBlocked() const {
  std::vector<std::string> out;
  for (const auto& r : reporters_) r(out);
  return out;
}

RandomStream Simulator::Stream(std::string_view tag) const {
  return RandomStream(HashCombine(seed_, HashString(tag)));
}

RandomStream Simulator::Stream(std::uint64_t tag) const {
  return RandomStream(HashCombine(seed_, tag));
}

}  // namespace rsskv
