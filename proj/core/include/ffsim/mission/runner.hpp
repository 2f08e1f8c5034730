#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffsim/energy/ledger.hpp"
#include "ffsim/mission/scenario.hpp"
#include "ffsim/mothership/server.hpp"
#include "ffsim/physics/body.hpp"
#include "ffsim/simnet/engine.hpp"

namespace ffsim::mission {

struct MissionOutcome {
  double announce_ms = 0.0;  // global time the announcement was accepted
  mothership::MissionParams params;
  std::optional<std::uint64_t> start_ms;  // registered start, server timeline
  std::optional<double> master_actuation_ms;  // global timeline
  std::optional<double> slave_actuation_ms;
  std::optional<double> sync_error_ms;
  bool complete = false;
};

struct AgentReport {
  double energy_uj = 0.0;
  double busy_ms = 0.0;
  std::map<std::string, std::uint64_t> action_counts;
  std::uint64_t dropped_events = 0;
  std::vector<energy::ChargedAction> charges;
};

struct PhaseChange {
  double t_ms = 0.0;  // global timeline
  std::string phase;
};

struct DebrisReport {
  physics::Pose final_pose;
  physics::Velocity final_velocity;
  double peak_omega = 0.0;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double t_end_ms = 0.0;

  bool mission_complete = false;
  std::string stall_phase;  // server phase at t_end when incomplete
  std::optional<double> sync_error_ms;  // first mission's

  std::vector<MissionOutcome> missions;
  AgentReport master;
  AgentReport slave;
  std::vector<PhaseChange> phase_trace;
  simnet::FrameCounters messages;
  std::optional<DebrisReport> debris;

  std::vector<std::string> event_log;  // JSON lines, in dispatch order
  std::vector<physics::TrajectorySample> trajectory;
  std::vector<mothership::LogEntry> server_log;
};

struct RunOptions {
  bool physics = true;
  std::optional<std::uint64_t> seed_override;
};

/// Executes the full mission: the base station announces over CoAP, the
/// master schedules the start, the slave polls, both actuate on their local
/// clocks, the server resets. Everything the master and slave do on the
/// network is driven by their agent programs.
RunReport run(const Scenario& scenario, const RunOptions& options = {});

/// Writes events.jsonl, report.json, trace.csv (synthetic master current),
/// and trajectory.csv (when physics ran) under out_dir. Byte-stable for
/// identical reports. Returns the written paths.
std::vector<std::string> emit_outputs(const RunReport& report,
                                      const Scenario& scenario,
                                      const std::string& out_dir);

/// report.json payload (also embedded in emit_outputs).
std::string report_to_json(const RunReport& report);

/// Optional JSON-lines export of the server's /logging resource.
std::string server_log_to_jsonl(const RunReport& report);

}  // namespace ffsim::mission
