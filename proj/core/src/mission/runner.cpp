#include "ffsim/mission/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "ffsim/agentspeak/interpreter.hpp"
#include "ffsim/coap/codec.hpp"
#include "ffsim/coap/match.hpp"

namespace ffsim::mission {

namespace {

using agentspeak::Term;
using agentspeak::TriggerEvent;
using agentspeak::TriggerKind;
using nlohmann::ordered_json;
using simnet::TimeUs;

class MissionError : public std::runtime_error {
public:
  explicit MissionError(const std::string& what) : std::runtime_error(what) {}
};

double arg_number(const agentspeak::ExternalActionRequest& req, std::size_t i) {
  if (i >= req.args.size() || !req.args[i].is_num())
    throw MissionError("action " + req.name + " expects a number in argument " +
                       std::to_string(i + 1));
  return req.args[i].number();
}

struct ActuationPlan {
  double local_start_ms = 0.0;
  double speed = 0.0;
  double length_ms = 0.0;
  bool fired = false;
  std::int64_t serial = 0;
};

struct RadioExchange {
  coap::Message request;
  std::int64_t serial = 0;
  int retries_left = coap::kMaxRetransmits;
  std::string action;  // agent action completed by the response; "" for base
  std::uint64_t announced_start_ms = 0;
};

class Runner {
public:
  Runner(const Scenario& sc, const RunOptions& opt)
      : sc_(sc),
        opt_(opt),
        seed_(opt.seed_override.value_or(sc.seed)),
        engine_(seed_, sc.link) {}

  RunReport run();

private:
  struct Agent {
    simnet::NodeId id;
    const AgentConfig* cfg = nullptr;
    agentspeak::AgentState state;
    energy::Ledger ledger;
    bool booted = false;
    std::uint16_t next_mid = 0;
    std::int64_t next_serial = 1;
    std::optional<RadioExchange> radio;
    bool waiting_beacon = false;  // a listen_gs is armed
    std::optional<ActuationPlan> actuation;
    std::int64_t wait_serial = 0;  // current wait_poll, 0 = none

    Agent(simnet::NodeId node, const AgentConfig& config,
          const energy::CostTable& costs)
        : id(node), cfg(&config), ledger(costs) {}
  };

  // --- logging -----------------------------------------------------------

  ordered_json& log(const std::string& node, const std::string& kind) {
    ordered_json entry;
    entry["t_ms"] = engine_.now_ms();
    entry["node"] = node;
    entry["kind"] = kind;
    entry["detail"] = ordered_json::object();
    log_.push_back(std::move(entry));
    return log_.back()["detail"];
  }

  // --- frames ------------------------------------------------------------

  void send_coap(const simnet::NodeId& from, const simnet::NodeId& to,
                 const coap::Message& msg, bool retransmission) {
    simnet::Frame frame;
    frame.src = from;
    frame.dst = to;
    frame.kind = simnet::FrameKind::Coap;
    frame.bytes = coap::encode_message(msg);
    frame.retransmission = retransmission;
    unsigned on_air = static_cast<unsigned>(frame.bytes.size()) +
                      engine_.link_between(from, to).framing_overhead_bytes;
    ordered_json& d = log(from.name(), retransmission ? "retransmit" : "frame_tx");
    d["dst"] = to.name();
    d["proto"] = "coap";
    d["summary"] = msg.summary();
    d["mid"] = msg.message_id;
    d["bytes_on_air"] = on_air;
    if (!msg.payload.empty()) d["payload"] = msg.payload_text();
    engine_.send_frame(std::move(frame));
  }

  void send_beacon(const simnet::NodeId& to) {
    simnet::Frame frame;
    frame.src = nodes::base;
    frame.dst = to;
    frame.kind = simnet::FrameKind::Beacon;
    unsigned on_air = engine_.link_between(nodes::base, to).framing_overhead_bytes;
    ordered_json& d = log(nodes::base.name(), "frame_tx");
    d["dst"] = to.name();
    d["proto"] = "beacon";
    d["summary"] = "mission beacon";
    d["bytes_on_air"] = on_air;
    engine_.send_frame(std::move(frame));
  }

  void log_rx(const simnet::Frame& frame, const coap::Message* msg) {
    ordered_json& d = log(frame.dst.name(), "frame_rx");
    d["src"] = frame.src.name();
    d["proto"] = frame.kind == simnet::FrameKind::Coap ? "coap" : "beacon";
    if (msg) {
      d["summary"] = msg->summary();
      d["mid"] = msg->message_id;
      if (!msg->payload.empty()) d["payload"] = msg->payload_text();
    } else if (frame.kind == simnet::FrameKind::Beacon) {
      d["summary"] = "mission beacon";
    }
    d["bytes_on_air"] = frame.on_air_bytes;
  }

  // --- mothership --------------------------------------------------------

  double server_now_ms() const {
    return sc_.mothership_clock.local_now_ms(engine_.now_us());
  }

  void note_phase(mothership::MissionPhase phase) {
    phase_trace_.push_back({engine_.now_ms(), mothership::phase_name(phase)});
    ordered_json& d = log(nodes::mothership.name(), "phase");
    d["phase"] = mothership::phase_name(phase);
    d["server_time_ms"] = server_now_ms();
  }

  void server_tick() {
    if (auto changed = server_.tick(server_now_ms())) note_phase(*changed);
  }

  void handle_mothership(const simnet::SimEvent& ev) {
    if (const simnet::Timer* t = std::get_if<simnet::Timer>(&ev.kind)) {
      if (t->tag == "phase") server_tick();
      return;
    }
    const simnet::Frame& frame = std::get<simnet::Deliver>(ev.kind).frame;
    if (frame.kind != simnet::FrameKind::Coap) return;

    coap::Message msg;
    try {
      msg = coap::decode_message(frame.bytes);
    } catch (const coap::DecodeError& e) {
      ordered_json& d = log(nodes::mothership.name(), "decode_error");
      d["src"] = frame.src.name();
      d["error"] = e.what();
      return;
    }
    log_rx(frame, &msg);

    server_tick();
    mothership::MissionPhase before = server_.phase();
    const auto start_before = server_.record().start_time_ms;
    coap::Message response = server_.handle_request(msg, frame.src, server_now_ms());
    mothership::MissionPhase after = server_.phase();

    if (after != before) {
      note_phase(after);
      if (after == mothership::MissionPhase::Announced) {
        MissionOutcome outcome;
        outcome.announce_ms = engine_.now_ms();
        outcome.params = *server_.record().params;
        missions_.push_back(outcome);
      }
      if (after == mothership::MissionPhase::Scheduled &&
          server_.record().start_time_ms != start_before) {
        if (!missions_.empty())
          missions_.back().start_ms = server_.record().start_time_ms;
        schedule_phase_timers(*server_.record().start_time_ms);
      }
    }
    send_coap(nodes::mothership, frame.src, response, false);
  }

  void schedule_phase_timers(std::uint64_t start_local_ms) {
    const simnet::NodeClock& clock = sc_.mothership_clock;
    double start = static_cast<double>(start_local_ms);
    double len = static_cast<double>(server_.record().params->mission_length_ms);
    for (double at : {start, start + len, start + len + 1.0}) {
      engine_.schedule_timer(clock.local_to_global_us(at),
                             simnet::Timer{nodes::mothership, "phase"});
    }
  }

  // --- base station ------------------------------------------------------

  void handle_base(const simnet::SimEvent& ev) {
    if (const simnet::Timer* t = std::get_if<simnet::Timer>(&ev.kind)) {
      if (t->tag == "announce") {
        coap::Message put = coap::make_request(
            coap::Type::Confirmable, coap::Code::Put, base_next_mid_++, "mission",
            mothership::format_params_payload(sc_.params));
        base_radio_ = RadioExchange{put, ++base_serial_, coap::kMaxRetransmits, "", 0};
        send_coap(nodes::base, nodes::mothership, put, false);
        schedule_retx(nodes::base, base_serial_);
      } else if (t->tag == "retx") {
        handle_base_retx(t->a);
      }
      return;
    }
    const simnet::Frame& frame = std::get<simnet::Deliver>(ev.kind).frame;
    if (frame.kind != simnet::FrameKind::Coap || !base_radio_) return;
    coap::Message msg;
    try {
      msg = coap::decode_message(frame.bytes);
    } catch (const coap::DecodeError&) {
      return;
    }
    log_rx(frame, &msg);
    std::set<coap::RequestKey> outstanding{
        {nodes::mothership, base_radio_->request.message_id,
         base_radio_->request.token}};
    auto match = coap::match_response(outstanding, msg, frame.src);
    if (!match) return;
    base_radio_.reset();
    if (!match->rejected && msg.code == coap::Code::Changed) {
      // Registration confirmed; wake the agents.
      send_beacon(nodes::master);
      send_beacon(nodes::slave);
    } else {
      ordered_json& d = log(nodes::base.name(), "announce_failed");
      d["response"] = msg.summary();
    }
  }

  void handle_base_retx(std::int64_t serial) {
    if (!base_radio_ || base_radio_->serial != serial) return;
    if (base_radio_->retries_left > 0) {
      --base_radio_->retries_left;
      send_coap(nodes::base, nodes::mothership, base_radio_->request, true);
      schedule_retx(nodes::base, serial);
    } else {
      log(nodes::base.name(), "announce_timeout");
      base_radio_.reset();
    }
  }

  void schedule_retx(const simnet::NodeId& node, std::int64_t serial) {
    engine_.schedule_timer(engine_.now_us() + simnet::ms_to_us(coap::kAckTimeoutMs),
                           simnet::Timer{node, "retx", serial});
  }

  // --- agents ------------------------------------------------------------

  Agent& agent_for(const simnet::NodeId& id) {
    return id == nodes::master ? *master_ : *slave_;
  }

  double agent_local_ms(const Agent& a) const {
    return a.cfg->clock.local_now_ms(engine_.now_us());
  }

  void handle_agent(const simnet::NodeId& id, const simnet::SimEvent& ev) {
    Agent& a = agent_for(id);
    if (const simnet::Timer* t = std::get_if<simnet::Timer>(&ev.kind)) {
      if (t->tag == "boot") {
        a.state = agentspeak::AgentState::boot(a.cfg->program);
        a.booted = true;
        ordered_json& d = log(id.name(), "boot");
        d["local_ms"] = agent_local_ms(a);
        pump(a);
      } else if (!a.booted) {
        return;  // stray timers before boot
      } else if (t->tag == "retx") {
        handle_agent_retx(a, t->a);
      } else if (t->tag == "wait") {
        if (a.wait_serial == t->a) {
          a.wait_serial = 0;
          resolve(a, Term::atom("ok"));
        }
      } else if (t->tag == "actuate") {
        handle_actuation(a, t->a);
      }
      return;
    }

    const simnet::Frame& frame = std::get<simnet::Deliver>(ev.kind).frame;
    if (!a.booted) return;  // radio is down before boot
    if (frame.kind == simnet::FrameKind::Beacon) {
      log_rx(frame, nullptr);
      if (a.waiting_beacon) {
        a.waiting_beacon = false;
        begin_listen_get(a, "listen_gs");
      } else {
        a.state.post_event({TriggerKind::BeliefAdd, Term::atom("mission_announced")});
        pump(a);
      }
      return;
    }

    coap::Message msg;
    try {
      msg = coap::decode_message(frame.bytes);
    } catch (const coap::DecodeError& e) {
      ordered_json& d = log(id.name(), "decode_error");
      d["error"] = e.what();
      return;
    }
    log_rx(frame, &msg);
    if (!a.radio) return;
    std::set<coap::RequestKey> outstanding{
        {nodes::mothership, a.radio->request.message_id, a.radio->request.token}};
    auto match = coap::match_response(outstanding, msg, frame.src);
    if (!match) {
      ordered_json& d = log(id.name(), "stray_response");
      d["summary"] = msg.summary();
      return;
    }
    RadioExchange exchange = *a.radio;
    a.radio.reset();
    if (match->rejected) {
      resolve(a, Term::atom("rejected"));
      return;
    }
    resolve(a, response_result(exchange, msg));
  }

  Term response_result(const RadioExchange& exchange, const coap::Message& msg) {
    if (exchange.action == "announce_perform_mission") {
      if (msg.code == coap::Code::Changed)
        return Term::num(static_cast<double>(exchange.announced_start_ms));
      return Term::atom("bad_request");
    }
    // listen_gs / listen_server GET results.
    if (msg.code == coap::Code::Content) {
      auto record = mothership::parse_mission_record(msg.payload_text());
      if (!record) return Term::atom("bad_request");
      if (record->start_time_ms) {
        return Term::structure(
            "scheduled",
            {Term::num(record->params.motor_speed),
             Term::num(static_cast<double>(record->params.mission_length_ms)),
             Term::num(static_cast<double>(*record->start_time_ms))});
      }
      return Term::structure(
          "mission",
          {Term::num(record->params.motor_speed),
           Term::num(static_cast<double>(record->params.mission_length_ms))});
    }
    if (msg.code == coap::Code::NotFound) return Term::atom("no_mission");
    return Term::atom("bad_request");
  }

  void handle_agent_retx(Agent& a, std::int64_t serial) {
    if (!a.radio || a.radio->serial != serial) return;
    if (a.radio->retries_left > 0) {
      --a.radio->retries_left;
      send_coap(a.id, nodes::mothership, a.radio->request, true);
      schedule_retx(a.id, serial);
    } else {
      a.radio.reset();
      resolve(a, Term::atom("timeout"));
    }
  }

  void handle_actuation(Agent& a, std::int64_t serial) {
    if (!a.actuation || a.actuation->serial != serial || a.actuation->fired) return;
    ActuationPlan& plan = *a.actuation;
    plan.fired = true;
    ordered_json& d = log(a.id.name(), "actuation");
    d["t_local_ms"] = plan.local_start_ms;
    d["speed"] = plan.speed;
    d["len_ms"] = plan.length_ms;
    d["mode"] = sc_.actuation == ActuationMode::Push ? "push" : "led";

    record_actuation(a.id, plan);
    if (sc_.actuation == ActuationMode::Push) {
      physics::PushCommand push;
      double off = sc_.physics.contact_offset_m;
      push.body_point = a.id == nodes::master ? physics::Vec2{off, 0.0}
                                              : physics::Vec2{-off, 0.0};
      push.direction = {0.0, 1.0};
      push.force_n = sc_.physics.force_max_n * plan.speed / 100.0;
      push.start_ms = engine_.now_ms();
      push.duration_ms = plan.length_ms;
      pushes_.push_back(push);
    }
    a.state.post_event(
        {TriggerKind::BeliefAdd,
         Term::structure("actuated", {Term::num(plan.local_start_ms)})});
    pump(a);
  }

  void record_actuation(const simnet::NodeId& id, const ActuationPlan& plan) {
    for (MissionOutcome& m : missions_) {
      if (!m.start_ms ||
          static_cast<double>(*m.start_ms) != plan.local_start_ms)
        continue;
      auto& slot = id == nodes::master ? m.master_actuation_ms : m.slave_actuation_ms;
      if (!slot) slot = engine_.now_ms();
      return;
    }
  }

  void charge(Agent& a, const std::string& action) {
    // The optional spread draws from the scenario stream only when enabled,
    // keeping the draw sequence of deterministic runs undisturbed.
    double draw = sc_.costs.at(action).sigma_uj > 0.0 ? engine_.rng().uniform_pm1()
                                                      : 0.0;
    a.ledger.charge(action, engine_.now_ms(), draw);
  }

  void begin_listen_get(Agent& a, const std::string& action) {
    charge(a, action);
    coap::Message get = coap::make_request(coap::Type::Confirmable,
                                           coap::Code::Get, a.next_mid++, "mission");
    a.radio = RadioExchange{get, a.next_serial++, coap::kMaxRetransmits, action, 0};
    send_coap(a.id, nodes::mothership, get, false);
    schedule_retx(a.id, a.radio->serial);
  }

  void resolve(Agent& a, const Term& result) {
    ordered_json& d = log(a.id.name(), "action_done");
    d["name"] = a.state.pending_action() ? a.state.pending_action()->name : "?";
    d["result"] = result.to_string();
    a.state.resolve_action(result);
    pump(a);
  }

  void pump(Agent& a) {
    while (!a.state.action_in_flight() && a.state.has_work()) {
      auto req = a.state.reasoning_step();
      if (req) dispatch_action(a, *req);
    }
  }

  void dispatch_action(Agent& a, const agentspeak::ExternalActionRequest& req) {
    ordered_json& d = log(a.id.name(), "action");
    d["name"] = req.name;
    if (!req.args.empty()) {
      std::string args;
      for (std::size_t i = 0; i < req.args.size(); ++i) {
        if (i) args += ", ";
        args += req.args[i].to_string();
      }
      d["args"] = args;
    }

    if (req.name == "listen_gs") {
      a.waiting_beacon = true;  // the ground-station beacon triggers the GET
      return;
    }
    if (req.name == "listen_server") {
      begin_listen_get(a, "listen_server");
      return;
    }
    if (req.name == "announce_perform_mission") {
      double lead_ms = arg_number(req, 2);
      double local = agent_local_ms(a);
      auto start_ms = static_cast<std::uint64_t>(
          std::ceil((local + lead_ms) / 1000.0) * 1000.0);
      charge(a, req.name);
      coap::Message put = coap::make_request(
          coap::Type::Confirmable, coap::Code::Put, a.next_mid++, "mission",
          mothership::format_start_payload(start_ms));
      a.radio = RadioExchange{put, a.next_serial++, coap::kMaxRetransmits,
                              req.name, start_ms};
      send_coap(a.id, nodes::mothership, put, false);
      schedule_retx(a.id, a.radio->serial);
      return;
    }
    if (req.name == "schedule_actuation") {
      charge(a, req.name);
      double start_local = arg_number(req, 0);
      if (a.actuation && a.actuation->local_start_ms == start_local) {
        resolve(a, Term::atom("ok"));  // already armed (or fired) for this start
        return;
      }
      ActuationPlan plan;
      plan.local_start_ms = start_local;
      plan.speed = arg_number(req, 1);
      plan.length_ms = arg_number(req, 2);
      plan.serial = a.next_serial++;
      a.actuation = plan;
      engine_.schedule_timer(a.cfg->clock.local_to_global_us(start_local),
                             simnet::Timer{a.id, "actuate", plan.serial});
      resolve(a, Term::atom("ok"));
      return;
    }
    if (req.name == "wait_poll") {
      charge(a, req.name);
      double duration = arg_number(req, 0);
      a.wait_serial = a.next_serial++;
      engine_.schedule_timer(
          engine_.now_us() + a.cfg->clock.local_duration_us(duration),
          simnet::Timer{a.id, "wait", a.wait_serial});
      return;
    }
    throw MissionError("agent " + a.id.name() + " dispatched unknown action " +
                       req.name);
  }

  // --- reporting ---------------------------------------------------------

  RunReport assemble_report();

  const Scenario& sc_;
  RunOptions opt_;
  std::uint64_t seed_;
  simnet::Engine engine_;
  mothership::Server server_;

  std::optional<Agent> master_;
  std::optional<Agent> slave_;
  std::optional<RadioExchange> base_radio_;
  std::uint16_t base_next_mid_ = 0x1000;
  std::int64_t base_serial_ = 0;

  std::vector<ordered_json> log_;
  std::vector<MissionOutcome> missions_;
  std::vector<PhaseChange> phase_trace_;
  std::vector<physics::PushCommand> pushes_;
};

RunReport Runner::run() {
  master_.emplace(nodes::master, sc_.master, sc_.costs);
  slave_.emplace(nodes::slave, sc_.slave, sc_.costs);
  master_->next_mid = 0x2000;
  slave_->next_mid = 0x3000;

  for (const LinkOverride& ov : sc_.link_overrides)
    engine_.set_link_override(ov.a, ov.b, ov.link);

  engine_.set_handler(nodes::mothership, [this](simnet::Engine&, const simnet::SimEvent& ev) {
    handle_mothership(ev);
  });
  engine_.set_handler(nodes::base, [this](simnet::Engine&, const simnet::SimEvent& ev) {
    handle_base(ev);
  });
  engine_.set_handler(nodes::master, [this](simnet::Engine&, const simnet::SimEvent& ev) {
    handle_agent(nodes::master, ev);
  });
  engine_.set_handler(nodes::slave, [this](simnet::Engine&, const simnet::SimEvent& ev) {
    handle_agent(nodes::slave, ev);
  });
  engine_.set_lost_observer([this](const simnet::Frame& frame, TimeUs) {
    ordered_json& d = log(frame.src.name(), "frame_lost");
    d["dst"] = frame.dst.name();
    d["proto"] = frame.kind == simnet::FrameKind::Coap ? "coap" : "beacon";
    d["bytes_on_air"] = frame.on_air_bytes;
  });

  phase_trace_.push_back({0.0, mothership::phase_name(server_.phase())});

  engine_.schedule_timer(simnet::ms_to_us(sc_.master.boot_ms),
                         simnet::Timer{nodes::master, "boot"});
  engine_.schedule_timer(simnet::ms_to_us(sc_.slave.boot_ms),
                         simnet::Timer{nodes::slave, "boot"});
  for (std::size_t i = 0; i < sc_.announce_at_ms.size(); ++i) {
    double at = std::max(sc_.announce_at_ms[i], sc_.base_boot_ms);
    engine_.schedule_timer(simnet::ms_to_us(at),
                           simnet::Timer{nodes::base, "announce",
                                         static_cast<std::int64_t>(i)});
  }

  engine_.run_until(simnet::ms_to_us(sc_.t_end_ms));
  return assemble_report();
}

RunReport Runner::assemble_report() {
  RunReport report;
  report.scenario = sc_.name;
  report.seed = seed_;
  report.t_end_ms = sc_.t_end_ms;

  for (MissionOutcome& m : missions_) {
    if (m.master_actuation_ms && m.slave_actuation_ms) {
      m.sync_error_ms = std::fabs(*m.master_actuation_ms - *m.slave_actuation_ms);
      m.complete = true;
    }
  }
  report.missions = missions_;
  report.mission_complete =
      missions_.size() == sc_.announce_at_ms.size() &&
      std::all_of(missions_.begin(), missions_.end(),
                  [](const MissionOutcome& m) { return m.complete; }) &&
      server_.phase() == mothership::MissionPhase::Idle;
  if (!report.mission_complete)
    report.stall_phase = mothership::phase_name(server_.phase());
  if (!missions_.empty() && missions_.front().sync_error_ms)
    report.sync_error_ms = missions_.front().sync_error_ms;

  auto fill_agent = [](const Agent& a, AgentReport& out) {
    out.energy_uj = a.ledger.total_energy_uj();
    out.busy_ms = a.ledger.total_busy_ms();
    out.action_counts = a.ledger.counts();
    out.dropped_events = a.state.diagnostics().no_plan_events;
    out.charges = a.ledger.events();
  };
  fill_agent(*master_, report.master);
  fill_agent(*slave_, report.slave);

  report.phase_trace = phase_trace_;
  report.messages = engine_.counters();
  report.server_log = server_.log();

  if (opt_.physics && sc_.physics.enabled) {
    physics::WorldState world;
    world.debris = sc_.physics.debris;
    world.dt_ms = sc_.physics.dt_ms;
    world.active_pushes = pushes_;
    double peak = physics::integrate(world, sc_.t_end_ms, &report.trajectory);
    DebrisReport debris;
    debris.final_pose = world.debris.pose;
    debris.final_velocity = world.debris.velocity;
    debris.peak_omega = peak;
    report.debris = debris;
  }

  report.event_log.reserve(log_.size());
  for (const ordered_json& entry : log_)
    report.event_log.push_back(entry.dump());
  return report;
}

}  // namespace

RunReport run(const Scenario& scenario, const RunOptions& options) {
  Runner runner(scenario, options);
  return runner.run();
}

}  // namespace ffsim::mission
