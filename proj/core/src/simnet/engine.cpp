#include "ffsim/simnet/engine.hpp"

#include <stdexcept>

namespace ffsim::simnet {

const LinkModel& Engine::link_between(const NodeId& a, const NodeId& b) const {
  auto it = link_overrides_.find(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  return it != link_overrides_.end() ? it->second : default_link_;
}

void Engine::set_handler(const NodeId& node, Handler handler) {
  handlers_[node] = std::move(handler);
}

void Engine::set_link_override(const NodeId& a, const NodeId& b, LinkModel link) {
  link_overrides_[a < b ? std::make_pair(a, b) : std::make_pair(b, a)] = link;
}

void Engine::push(TimeUs at_us, std::variant<Deliver, Timer, PhysicsStep> kind) {
  SimEvent ev;
  ev.at_us = at_us;
  ev.seq = next_seq_++;
  ev.kind = std::move(kind);
  queue_.push(std::move(ev));
}

std::optional<TimeUs> Engine::send_frame(Frame frame) {
  if (frame.src == frame.dst)
    throw std::logic_error("send_frame: src == dst");
  const LinkModel& link = link_between(frame.src, frame.dst);
  frame.on_air_bytes =
      static_cast<unsigned>(frame.bytes.size()) + link.framing_overhead_bytes;

  ++counters_.sent;
  if (frame.retransmission) ++counters_.retransmitted;

  // Fixed draw order per transmission: loss, then jitter.
  double loss_draw = rng_.uniform01();
  double jitter_draw = rng_.uniform_pm1();
  if (loss_draw < link.loss_prob) {
    ++counters_.lost;
    if (lost_observer_) lost_observer_(frame, now_us_);
    return std::nullopt;
  }
  double delay_ms = link.base_latency_ms + link.jitter_ms * jitter_draw;
  if (delay_ms < 0.0) delay_ms = 0.0;
  TimeUs at = now_us_ + ms_to_us(delay_ms);
  push(at, Deliver{std::move(frame)});
  return at;
}

void Engine::schedule_timer(TimeUs at_us, Timer timer) {
  push(at_us < now_us_ ? now_us_ : at_us, std::move(timer));
}

void Engine::schedule_physics(TimeUs at_us, double dt_ms) {
  push(at_us < now_us_ ? now_us_ : at_us, PhysicsStep{dt_ms});
}

void Engine::run_until(TimeUs t_end_us) {
  if (t_end_us < now_us_)
    throw std::logic_error("run_until: t_end before current time");
  while (!queue_.empty() && queue_.top().at_us <= t_end_us) {
    SimEvent ev = queue_.top();
    queue_.pop();
    now_us_ = ev.at_us;
    if (observer_) observer_(ev);

    const NodeId* target = nullptr;
    if (const Deliver* d = std::get_if<Deliver>(&ev.kind)) {
      ++counters_.delivered;
      target = &d->frame.dst;
    } else if (const Timer* t = std::get_if<Timer>(&ev.kind)) {
      target = &t->node;
    }
    if (target) {
      auto it = handlers_.find(*target);
      if (it == handlers_.end())
        throw std::logic_error("no handler registered for node " + target->name());
      it->second(*this, ev);
    } else if (physics_handler_) {
      physics_handler_(*this, ev);
    }
  }
  now_us_ = t_end_us;
}

}  // namespace ffsim::simnet
