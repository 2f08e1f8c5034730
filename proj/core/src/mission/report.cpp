#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffsim/energy/butterworth.hpp"
#include "ffsim/mission/runner.hpp"

namespace ffsim::mission {

namespace {

using nlohmann::ordered_json;

ordered_json agent_json(const AgentReport& a) {
  ordered_json j;
  j["energy_uj"] = a.energy_uj;
  j["busy_ms"] = a.busy_ms;
  ordered_json counts = ordered_json::object();
  for (const auto& [name, n] : a.action_counts) counts[name] = n;
  j["actions"] = counts;
  j["dropped_events"] = a.dropped_events;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  ordered_json j;
  j["scenario"] = report.scenario;
  j["seed"] = report.seed;
  j["t_end_ms"] = report.t_end_ms;
  j["mission_complete"] = report.mission_complete;
  if (!report.mission_complete) j["stall_phase"] = report.stall_phase;
  if (report.sync_error_ms)
    j["sync_error_ms"] = *report.sync_error_ms;
  else
    j["sync_error_ms"] = nullptr;

  ordered_json missions = ordered_json::array();
  for (const MissionOutcome& m : report.missions) {
    ordered_json mj;
    mj["announce_ms"] = m.announce_ms;
    mj["speed"] = m.params.motor_speed;
    mj["len_ms"] = m.params.mission_length_ms;
    mj["start_ms"] = m.start_ms ? ordered_json(*m.start_ms) : ordered_json(nullptr);
    mj["master_actuation_ms"] = m.master_actuation_ms
                                    ? ordered_json(*m.master_actuation_ms)
                                    : ordered_json(nullptr);
    mj["slave_actuation_ms"] = m.slave_actuation_ms
                                   ? ordered_json(*m.slave_actuation_ms)
                                   : ordered_json(nullptr);
    mj["sync_error_ms"] =
        m.sync_error_ms ? ordered_json(*m.sync_error_ms) : ordered_json(nullptr);
    mj["complete"] = m.complete;
    missions.push_back(std::move(mj));
  }
  j["missions"] = missions;

  j["agents"]["master"] = agent_json(report.master);
  j["agents"]["slave"] = agent_json(report.slave);

  ordered_json phases = ordered_json::array();
  for (const PhaseChange& p : report.phase_trace) {
    ordered_json pj;
    pj["t_ms"] = p.t_ms;
    pj["phase"] = p.phase;
    phases.push_back(std::move(pj));
  }
  j["server"]["phase_trace"] = phases;
  j["server"]["log_entries"] = report.server_log.size();

  j["messages"]["sent"] = report.messages.sent;
  j["messages"]["delivered"] = report.messages.delivered;
  j["messages"]["lost"] = report.messages.lost;
  j["messages"]["retransmitted"] = report.messages.retransmitted;

  if (report.debris) {
    ordered_json dj;
    dj["x_m"] = report.debris->final_pose.x;
    dj["y_m"] = report.debris->final_pose.y;
    dj["theta_rad"] = report.debris->final_pose.theta;
    dj["vx_mps"] = report.debris->final_velocity.vx;
    dj["vy_mps"] = report.debris->final_velocity.vy;
    dj["omega_radps"] = report.debris->final_velocity.omega;
    dj["peak_omega_radps"] = report.debris->peak_omega;
    j["debris"] = dj;
  } else {
    j["debris"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string server_log_to_jsonl(const RunReport& report) {
  std::string out;
  for (const mothership::LogEntry& e : report.server_log) {
    ordered_json j;
    j["source"] = e.source.name();
    j["server_rx_time_ms"] = e.server_rx_time_ms;
    j["payload"] = e.payload;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::string> emit_outputs(const RunReport& report,
                                      const Scenario& scenario,
                                      const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());

  std::vector<std::string> written;

  std::string events;
  for (const std::string& line : report.event_log) {
    events += line;
    events += '\n';
  }
  write_file(dir / "events.jsonl", events);
  written.push_back((dir / "events.jsonl").string());

  write_file(dir / "report.json", report_to_json(report));
  written.push_back((dir / "report.json").string());

  // Synthetic master current trace.
  energy::TraceConfig cfg = scenario.trace;
  energy::CurrentTrace trace = energy::synth_trace(report.master.charges, cfg);
  std::ostringstream trace_csv;
  energy::write_trace_csv(trace_csv, trace);
  write_file(dir / "trace.csv", trace_csv.str());
  written.push_back((dir / "trace.csv").string());

  if (report.debris) {
    std::string csv = "t_ms,x,y,theta,vx,vy,omega\n";
    char line[160];
    for (const physics::TrajectorySample& s : report.trajectory) {
      std::snprintf(line, sizeof line, "%.3f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                    s.t_ms, s.pose.x, s.pose.y, s.pose.theta, s.velocity.vx,
                    s.velocity.vy, s.velocity.omega);
      csv += line;
    }
    write_file(dir / "trajectory.csv", csv);
    written.push_back((dir / "trajectory.csv").string());
  }
  return written;
}

}  // namespace ffsim::mission
