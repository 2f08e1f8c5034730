#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffsim/coap/message.hpp"
#include "ffsim/mothership/payload.hpp"
#include "ffsim/simnet/node_id.hpp"

namespace ffsim::mothership {

/// Mission lifecycle. Legal transitions form the single cycle
/// Idle -> Announced -> Scheduled -> Running -> Done -> Idle.
enum class MissionPhase { Idle, Announced, Scheduled, Running, Done };

const char* phase_name(MissionPhase p);

struct MissionRecord {
  std::optional<MissionParams> params;
  std::optional<std::uint64_t> start_time_ms;  // server timeline
  MissionPhase phase = MissionPhase::Idle;
};

struct LogEntry {
  simnet::NodeId source;
  double server_rx_time_ms = 0.0;
  std::string payload;
};

/// The CoAP server owning /mission and /logging. A deterministic state
/// machine: all methods take the server-local time explicitly.
class Server {
public:
  const MissionRecord& record() const { return record_; }
  MissionPhase phase() const { return record_.phase; }
  const std::vector<LogEntry>& log() const { return log_; }

  /// Dispatches a decoded request and produces the (piggybacked) response.
  /// Confirmable duplicates (same peer and message id) replay the cached
  /// response without re-touching state.
  coap::Message handle_request(const coap::Message& request,
                               const simnet::NodeId& from, double now_ms);

  /// Idle -> Announced. Returns false (no state change) out of phase or for
  /// invalid parameters.
  bool put_mission_params(const MissionParams& params, double now_ms);

  /// Announced -> Scheduled; start must lie in the server's future.
  bool put_start_time(std::uint64_t start_time_ms, double now_ms);

  /// 2.05 payload for /mission, or nullopt when nothing is announced.
  std::optional<std::string> get_mission() const;

  void put_log(const simnet::NodeId& from, std::string payload, double now_ms);

  /// Applies at most one phase transition:
  ///   Scheduled and now >= start          -> Running
  ///   Running and now >= start + length   -> Done
  ///   Done                                -> Idle (params and start cleared)
  /// Returns the new phase when a transition fired.
  std::optional<MissionPhase> tick(double now_ms);

private:
  coap::Message dispatch(const coap::Message& request,
                         const simnet::NodeId& from, double now_ms);

  MissionRecord record_;
  std::vector<LogEntry> log_;
  std::map<std::pair<simnet::NodeId, std::uint16_t>, coap::Message> replay_cache_;
};

}  // namespace ffsim::mothership
