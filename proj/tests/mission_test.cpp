#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "ffsim/mission/runner.hpp"

using namespace ffsim;
using namespace ffsim::mission;
using nlohmann::json;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(FFSIM_SCENARIO_DIR) + "/" + name;
}

Scenario default_scenario() { return load_scenario(scenario_path("default.yaml")); }

// Ordered protocol milestones extracted from the event log; used to compare
// against the expected mission sequence.
std::vector<std::string> milestones(const RunReport& report) {
  std::vector<std::string> out;
  for (const std::string& line : report.event_log) {
    json e = json::parse(line);
    const std::string kind = e["kind"];
    const std::string node = e["node"];
    if (kind == "frame_rx" && node == "mothership" &&
        e["detail"]["proto"] == "coap") {
      out.push_back("server<-" + std::string(e["detail"]["src"]) + " " +
                    std::string(e["detail"]["summary"]));
    } else if (kind == "actuation") {
      out.push_back("actuate " + node);
    } else if (kind == "phase") {
      out.push_back("phase " + std::string(e["detail"]["phase"]));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("default scenario loads with the documented values") {
  Scenario sc = default_scenario();
  CHECK(sc.seed == 42);
  CHECK(sc.t_end_ms == 10000.0);
  CHECK(sc.link.base_latency_ms == 10.0);
  CHECK(sc.link.framing_overhead_bytes == 58);
  CHECK(sc.params.motor_speed == 40);
  CHECK(sc.params.mission_length_ms == 1500);
  CHECK(sc.master.program->plans.size() >= 4);
  CHECK(sc.slave.program->plans.size() >= 6);
}

TEST_CASE("default run: complete mission with zero sync error") {
  RunReport report = run(default_scenario());

  REQUIRE(report.mission_complete);
  REQUIRE(report.missions.size() == 1);
  const MissionOutcome& m = report.missions[0];
  REQUIRE(m.start_ms.has_value());
  CHECK(*m.start_ms % 1000 == 0);  // starts land on whole seconds
  REQUIRE(report.sync_error_ms.has_value());
  CHECK(*report.sync_error_ms == 0.0);  // identical clocks: exactly zero

  // Master does exactly one GET and one start registration per mission.
  CHECK(report.master.action_counts.at("listen_gs") == 1);
  CHECK(report.master.action_counts.at("announce_perform_mission") == 1);
  CHECK(report.master.energy_uj == 565.0);

  // Slave polls roughly lead/interval times and pays per poll.
  std::uint64_t polls = report.slave.action_counts.at("listen_server");
  CHECK(polls >= 4);
  CHECK(polls <= 6);
  CHECK(report.slave.energy_uj == 276.0 * static_cast<double>(polls));

  // Frame conservation.
  CHECK(report.messages.delivered + report.messages.lost == report.messages.sent);
  CHECK(report.messages.lost == 0);
  CHECK(report.messages.retransmitted == 0);
}

TEST_CASE("default run: protocol milestones follow the mission sequence") {
  RunReport report = run(default_scenario());
  auto seq = milestones(report);

  // Expected shape: announce, master fetch, start registration, slave polls,
  // running, both actuations, done, reset.
  std::vector<std::string> expected_prefix{
      "server<-base CON PUT /mission",
      "phase announced",
      "server<-master CON GET /mission",
      "server<-master CON PUT /mission",
      "phase scheduled",
  };
  REQUIRE(seq.size() >= expected_prefix.size());
  for (std::size_t i = 0; i < expected_prefix.size(); ++i)
    CHECK(seq[i] == expected_prefix[i]);

  // All remaining server requests before the start are slave polls.
  std::size_t i = expected_prefix.size();
  std::size_t poll_count = 0;
  while (i < seq.size() && seq[i] == "server<-slave CON GET /mission") {
    ++poll_count;
    ++i;
  }
  CHECK(poll_count >= 4);

  // The mission then runs, both agents actuate, the server finishes and
  // resets.
  std::vector<std::string> tail(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                seq.end());
  std::vector<std::string> expected_tail{
      "phase running", "actuate master", "actuate slave",
      "phase done",    "phase idle",
  };
  CHECK(tail == expected_tail);
}

TEST_CASE("default run: canonical byte counts on air") {
  RunReport report = run(default_scenario());
  std::size_t gets = 0, start_puts = 0;
  for (const std::string& line : report.event_log) {
    json e = json::parse(line);
    if (e["kind"] != "frame_tx") continue;
    const auto& d = e["detail"];
    if (d["proto"] != "coap") continue;
    std::string summary = d["summary"];
    if (summary == "CON GET /mission") {
      CHECK(d["bytes_on_air"] == 70);
      ++gets;
    }
    if (summary == "CON PUT /mission" && e["node"] == "master") {
      CHECK(d["bytes_on_air"] == 78);
      ++start_puts;
    }
  }
  CHECK(gets >= 5);       // master's fetch plus the slave polls
  CHECK(start_puts == 1);
}

TEST_CASE("clock offsets (+10.0, -11.2) reproduce a 21.2 ms sync error") {
  RunReport report = run(load_scenario(scenario_path("offsets.yaml")));
  REQUIRE(report.mission_complete);
  REQUIRE(report.sync_error_ms.has_value());
  CHECK(*report.sync_error_ms == doctest::Approx(21.2).epsilon(1e-9));
}

TEST_CASE("random offset pairs: sync error equals the offset difference") {
  Scenario sc = default_scenario();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    double off_m = (static_cast<double>(rng() % 8000) - 4000.0) / 100.0;
    double off_s = (static_cast<double>(rng() % 8000) - 4000.0) / 100.0;
    sc.master.clock.offset_ms = off_m;
    sc.slave.clock.offset_ms = off_s;
    RunOptions opt;
    opt.physics = false;
    RunReport report = run(sc, opt);
    REQUIRE(report.mission_complete);
    CHECK(*report.sync_error_ms ==
          doctest::Approx(std::fabs(off_m - off_s)).epsilon(1e-6));
  }
}

TEST_CASE("fully lossy slave link: mission incomplete, slave never actuates") {
  RunReport report = run(load_scenario(scenario_path("lossy_slave.yaml")));
  CHECK_FALSE(report.mission_complete);
  REQUIRE(report.missions.size() == 1);
  CHECK(report.missions[0].master_actuation_ms.has_value());
  CHECK_FALSE(report.missions[0].slave_actuation_ms.has_value());
  CHECK_FALSE(report.sync_error_ms.has_value());
  CHECK(report.messages.lost > 0);
  CHECK(report.messages.retransmitted > 0);
}

TEST_CASE("repetition: two missions through the reset path are isomorphic") {
  RunReport report = run(load_scenario(scenario_path("repeat.yaml")));
  REQUIRE(report.mission_complete);
  REQUIRE(report.missions.size() == 2);
  CHECK(report.missions[0].complete);
  CHECK(report.missions[1].complete);
  CHECK(*report.missions[0].sync_error_ms == 0.0);
  CHECK(*report.missions[1].sync_error_ms == 0.0);
  CHECK(report.master.action_counts.at("listen_gs") == 2);
  CHECK(report.master.energy_uj == 2.0 * 565.0);

  // Same protocol structure in both rounds: compare the milestone sequences
  // of the two mission windows.
  auto seq = milestones(report);
  auto second_announce = std::find(seq.begin() + 1, seq.end(),
                                   "server<-base CON PUT /mission");
  REQUIRE(second_announce != seq.end());
  std::vector<std::string> round1(seq.begin(), second_announce);
  std::vector<std::string> round2(second_announce, seq.end());
  CHECK(round1 == round2);
}

TEST_CASE("determinism: identical scenario and seed give identical outputs") {
  Scenario sc = default_scenario();
  RunReport a = run(sc);
  RunReport b = run(sc);
  CHECK(a.event_log == b.event_log);
  CHECK(report_to_json(a) == report_to_json(b));

  RunOptions other_seed;
  other_seed.seed_override = 43;
  RunReport c = run(sc, other_seed);
  CHECK(a.event_log != c.event_log);
}

TEST_CASE("emit_outputs writes the run artifacts") {
  namespace fs = std::filesystem;
  Scenario sc = default_scenario();
  RunReport report = run(sc);

  fs::path dir = fs::temp_directory_path() / "ffsim_mission_test_out";
  fs::remove_all(dir);
  auto written = emit_outputs(report, sc, dir.string());
  CHECK(written.size() == 4);
  CHECK(fs::exists(dir / "events.jsonl"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(fs::exists(dir / "trajectory.csv"));

  json parsed = json::parse(std::ifstream(dir / "report.json"));
  CHECK(parsed.contains("sync_error_ms"));
  CHECK(parsed["mission_complete"] == true);

  // Without physics there is no trajectory.
  RunOptions opt;
  opt.physics = false;
  RunReport lean = run(sc, opt);
  fs::path dir2 = fs::temp_directory_path() / "ffsim_mission_test_out2";
  fs::remove_all(dir2);
  auto written2 = emit_outputs(lean, sc, dir2.string());
  CHECK(written2.size() == 3);
  CHECK_FALSE(fs::exists(dir2 / "trajectory.csv"));

  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("debris moves when both agents push") {
  RunReport report = run(default_scenario());
  REQUIRE(report.debris.has_value());
  CHECK(report.debris->final_pose.y > 0.0);
  CHECK(std::fabs(report.debris->final_pose.theta) < 1e-9);  // synchronized
  CHECK(std::fabs(report.debris->peak_omega) < 1e-12);
  CHECK_FALSE(report.trajectory.empty());
}

TEST_CASE("scenario validation rejects broken configurations") {
  CHECK_THROWS_AS(load_scenario(scenario_path("missing.yaml")), ScenarioError);

  Scenario sc = default_scenario();
  sc.master.clock.drift_ppm = 500.0;
  CHECK_THROWS_AS(sc.validate(), ScenarioError);

  Scenario bad_params = default_scenario();
  bad_params.params.motor_speed = 150;
  CHECK_THROWS_AS(bad_params.validate(), ScenarioError);

  Scenario no_announce = default_scenario();
  no_announce.announce_at_ms.clear();
  CHECK_THROWS_AS(no_announce.validate(), ScenarioError);
}

TEST_CASE("server log export is JSON lines") {
  RunReport report = run(default_scenario());
  // The default mission does not write to /logging.
  CHECK(report.server_log.empty());
  CHECK(server_log_to_jsonl(report).empty());
}
