#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "ffsim/simnet/clock.hpp"
#include "ffsim/simnet/node_id.hpp"
#include "ffsim/simnet/rng.hpp"

namespace ffsim::simnet {

/// Latency/loss abstraction of the mesh link between two nodes. Transmission
/// time is folded into base_latency; there is no explicit bitrate.
struct LinkModel {
  double base_latency_ms = 5.0;
  double jitter_ms = 2.0;       // half-width of the uniform jitter
  double loss_prob = 0.0;
  unsigned framing_overhead_bytes = 58;  // lower layers added to each frame
};

enum class FrameKind { Coap, Beacon };

struct Frame {
  NodeId src;
  NodeId dst;
  FrameKind kind = FrameKind::Coap;
  std::vector<std::uint8_t> bytes;  // CoAP wire bytes; empty for beacons
  unsigned on_air_bytes = 0;        // payload + configured framing overhead
  bool retransmission = false;
};

struct Deliver {
  Frame frame;
};

struct Timer {
  NodeId node;
  std::string tag;
  std::int64_t a = 0;  // tag-specific payload
  std::int64_t b = 0;
};

struct PhysicsStep {
  double dt_ms = 0.0;
};

struct SimEvent {
  TimeUs at_us = 0;
  std::uint64_t seq = 0;  // insertion order; ties dispatch in this order
  std::variant<Deliver, Timer, PhysicsStep> kind;
};

struct FrameCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
  std::uint64_t retransmitted = 0;
};

/// Deterministic discrete-event core: a single timeline ordered by
/// (at_us, seq), a seeded random stream, and a per-pair link model.
class Engine {
public:
  using Handler = std::function<void(Engine&, const SimEvent&)>;
  /// Dispatch observer used for event logging.
  using Observer = std::function<void(const SimEvent&)>;
  using LostObserver = std::function<void(const Frame&, TimeUs)>;

  Engine(std::uint64_t seed, LinkModel default_link)
      : rng_(seed), default_link_(default_link) {}

  TimeUs now_us() const { return now_us_; }
  double now_ms() const { return us_to_ms(now_us_); }
  Rng& rng() { return rng_; }
  const FrameCounters& counters() const { return counters_; }
  const LinkModel& link_between(const NodeId& a, const NodeId& b) const;

  void set_handler(const NodeId& node, Handler handler);
  void set_physics_handler(Handler handler) { physics_handler_ = std::move(handler); }
  void set_observer(Observer observer) { observer_ = std::move(observer); }
  void set_lost_observer(LostObserver observer) { lost_observer_ = std::move(observer); }
  /// Directional override for the pair (applies to both directions).
  void set_link_override(const NodeId& a, const NodeId& b, LinkModel link);

  /// Offers a frame to the link. Draws loss then jitter from the scenario
  /// stream; returns the scheduled delivery time, or nullopt when the frame
  /// was lost.
  std::optional<TimeUs> send_frame(Frame frame);

  void schedule_timer(TimeUs at_us, Timer timer);
  void schedule_physics(TimeUs at_us, double dt_ms);

  /// Pops and dispatches events in (at_us, seq) order until the queue is
  /// exhausted or t_end is reached; time then advances to t_end.
  void run_until(TimeUs t_end_us);

  bool queue_empty() const { return queue_.empty(); }

private:
  struct EventOrder {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.at_us != b.at_us) return a.at_us > b.at_us;
      return a.seq > b.seq;
    }
  };

  void push(TimeUs at_us, std::variant<Deliver, Timer, PhysicsStep> kind);

  Rng rng_;
  LinkModel default_link_;
  std::map<std::pair<NodeId, NodeId>, LinkModel> link_overrides_;
  std::map<NodeId, Handler> handlers_;
  Handler physics_handler_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> queue_;
  Observer observer_;
  LostObserver lost_observer_;
  FrameCounters counters_;
  TimeUs now_us_ = 0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace ffsim::simnet
