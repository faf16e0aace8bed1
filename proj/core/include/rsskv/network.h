#ifndef RSSKV_NETWORK_H_
#define RSSKV_NETWORK_H_

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rsskv/latency_matrix.h"
#include "rsskv/simulator.h"

namespace rsskv {

struct NetworkConfig {
  // Uniform jitter amplitude as a fraction of the one-way latency.
  double jitter_fraction = 0.05;
};

// Point-to-point FIFO channels between registered nodes. One-way latency is
// RTT/2 plus uniform jitter in [0, jitter_fraction * RTT/2]. Jitter on a
// channel is a pure function of (seed, from, to, message index on that
// channel), so traffic on one channel never perturbs another.
template <typename Message>
class Network {
 public:
  using Handler = std::function<void(NodeId from, const Message& msg)>;
  // Names must outlive the network (string literals).
  using Namer = std::function<std::string_view(const Message&)>;

  Network(Simulator& sim, LatencyMatrix matrix, NetworkConfig config, Namer namer = {})
      : sim_(sim),
        matrix_(std::move(matrix)),
        config_(config),
        namer_(std::move(namer)),
        jitter_seed_(HashCombine(sim.seed(), HashString("network-jitter"))) {
    if (config_.jitter_fraction < 0) throw std::invalid_argument("negative jitter");
  }

  NodeId AddNode(RegionId region, Handler handler) {
    if (region >= matrix_.size()) throw std::invalid_argument("node region out of range");
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{region, std::make_shared<Handler>(std::move(handler)), true});
    return id;
  }

  // Later deliveries to a removed node are dropped.
  void RemoveNode(NodeId id) {
    CheckNode(id);
    nodes_[id].alive = false;
    nodes_[id].handler.reset();
  }

  RegionId RegionOf(NodeId id) const {
    CheckNode(id);
    return nodes_[id].region;
  }

  // Returns the scheduled delivery time.
  Micros Send(NodeId from, NodeId to, Message msg) {
    CheckNode(from);
    CheckNode(to);
    Channel& ch = channels_[(static_cast<std::uint64_t>(from) << 32) | to];
    const Micros one_way = matrix_.OneWay(nodes_[from].region, nodes_[to].region);
    Micros jitter = 0;
    const auto amplitude = static_cast<Micros>(config_.jitter_fraction * one_way);
    if (amplitude > 0) {
      const std::uint64_t h = HashCombine(
          HashCombine(jitter_seed_, (static_cast<std::uint64_t>(from) << 32) | to),
          ch.sent);
      jitter = static_cast<Micros>(h % static_cast<std::uint64_t>(amplitude + 1));
    }
    ++ch.sent;
    const Micros at = std::max(sim_.now() + one_way + jitter, ch.last_delivery);
    ch.last_delivery = at;
    if (namer_) ++counts_[namer_(msg)];
    ++total_messages_;
    sim_.ScheduleAt(
        at,
        [this, from, to, m = std::move(msg)]() {
          const Node& n = nodes_[to];
          if (!n.alive) return;
          auto handler = n.handler;  // keep alive across RemoveNode in handler
          (*handler)(from, m);
        },
        to);
    return at;
  }

  const LatencyMatrix& matrix() const { return matrix_; }
  const std::map<std::string_view, std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total_messages() const { return total_messages_; }

 private:
  struct Node {
    RegionId region;
    std::shared_ptr<Handler> handler;
    bool alive;
  };
  struct Channel {
    std::uint64_t sent = 0;
    Micros last_delivery = 0;
  };

  void CheckNode(NodeId id) const {
    if (id >= nodes_.size()) {
      throw std::invalid_argument("unknown node " + std::to_string(id));
    }
  }

  Simulator& sim_;
  LatencyMatrix matrix_;
  NetworkConfig config_;
  Namer namer_;
  std::uint64_t jitter_seed_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, Channel> channels_;
  std::map<std::string_view, std::uint64_t> counts_;
  std::uint64_t total_messages_ = 0;
};

}  // namespace rsskv

#endif  // RSSKV_NETWORK_H_
