#include "ffsim/mission/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffsim/agentspeak/parser.hpp"

namespace ffsim::mission {

namespace fs = std::filesystem;

void Scenario::validate() const {
  if (t_end_ms <= 0.0) throw ScenarioError("t_end_ms must be positive");
  if (!params.valid())
    throw ScenarioError("mission parameters out of range (speed <= 100, len > 0)");
  if (announce_at_ms.empty())
    throw ScenarioError("at least one announce time is required");
  for (double t : announce_at_ms)
    if (t < 0.0 || t >= t_end_ms)
      throw ScenarioError("announce time outside the run window");
  auto check_clock = [&](const simnet::NodeClock& c, const char* who) {
    if (std::fabs(c.drift_ppm) > drift_limit_ppm)
      throw ScenarioError(std::string(who) + " drift exceeds the sanity bound of " +
                          std::to_string(drift_limit_ppm) + " ppm");
  };
  check_clock(mothership_clock, "mothership");
  check_clock(master.clock, "master");
  check_clock(slave.clock, "slave");
  if (!master.program || !slave.program)
    throw ScenarioError("master and slave agent programs must be loaded");
  costs.require_all(master.program->action_names());
  costs.require_all(slave.program->action_names());
  if (physics.enabled) {
    if (physics.debris.mass_kg <= 0.0 || physics.debris.inertia_kgm2 <= 0.0)
      throw ScenarioError("debris mass and inertia must be positive");
    if (physics.dt_ms <= 0.0) throw ScenarioError("physics dt must be positive");
  }
  if (link.base_latency_ms < 0.0 || link.jitter_ms < 0.0 ||
      link.loss_prob < 0.0 || link.loss_prob > 1.0)
    throw ScenarioError("link parameters out of range");
}

std::optional<simnet::NodeId> node_by_name(const std::string& name) {
  if (name == "base") return nodes::base;
  if (name == "mothership") return nodes::mothership;
  if (name == "master") return nodes::master;
  if (name == "slave") return nodes::slave;
  if (name == "debris") return nodes::debris;
  return std::nullopt;
}

namespace {

simnet::NodeClock load_clock(const YAML::Node& n) {
  simnet::NodeClock c;
  if (!n) return c;
  if (n["offset_ms"]) c.offset_ms = n["offset_ms"].as<double>();
  if (n["drift_ppm"]) c.drift_ppm = n["drift_ppm"].as<double>();
  return c;
}

simnet::LinkModel load_link(const YAML::Node& n, simnet::LinkModel base) {
  if (!n) return base;
  if (n["base_latency_ms"]) base.base_latency_ms = n["base_latency_ms"].as<double>();
  if (n["jitter_ms"]) base.jitter_ms = n["jitter_ms"].as<double>();
  if (n["loss_prob"]) base.loss_prob = n["loss_prob"].as<double>();
  if (n["framing_overhead_bytes"])
    base.framing_overhead_bytes = n["framing_overhead_bytes"].as<unsigned>();
  return base;
}

std::shared_ptr<const agentspeak::AgentProgram> load_program(const fs::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ScenarioError("cannot open agent program: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return std::make_shared<const agentspeak::AgentProgram>(
        agentspeak::parse_program(buf.str()));
  } catch (const agentspeak::ParseError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw ScenarioError("cannot load scenario " + path + ": " + e.what());
  }

  Scenario sc;
  sc.name = fs::path(path).stem().string();
  const fs::path dir = fs::path(path).parent_path();

  try {
    if (root["seed"]) sc.seed = root["seed"].as<std::uint64_t>();
    if (root["t_end_ms"]) sc.t_end_ms = root["t_end_ms"].as<double>();

    sc.link = load_link(root["link"], simnet::LinkModel{});
    if (root["link"] && root["link"]["overrides"]) {
      for (const YAML::Node& o : root["link"]["overrides"]) {
        LinkOverride ov;
        auto between = o["between"];
        if (!between || between.size() != 2)
          throw ScenarioError("link override needs between: [nodeA, nodeB]");
        auto a = node_by_name(between[0].as<std::string>());
        auto b = node_by_name(between[1].as<std::string>());
        if (!a || !b) throw ScenarioError("unknown node name in link override");
        ov.a = *a;
        ov.b = *b;
        ov.link = load_link(o, sc.link);
        sc.link_overrides.push_back(ov);
      }
    }

    const YAML::Node nodes_node = root["nodes"];
    if (!nodes_node || !nodes_node["mothership"] || !nodes_node["master"] ||
        !nodes_node["slave"] || !nodes_node["base_station"])
      throw ScenarioError(
          "scenario must define nodes: base_station, mothership, master, slave");

    sc.mothership_clock = load_clock(nodes_node["mothership"]["clock"]);
    if (nodes_node["base_station"]["boot_ms"])
      sc.base_boot_ms = nodes_node["base_station"]["boot_ms"].as<double>();

    auto load_agent = [&](const char* key) {
      const YAML::Node n = nodes_node[key];
      AgentConfig cfg;
      cfg.clock = load_clock(n["clock"]);
      if (n["boot_ms"]) cfg.boot_ms = n["boot_ms"].as<double>();
      if (!n["program"])
        throw ScenarioError(std::string(key) + " needs a program path");
      cfg.program_path = (dir / n["program"].as<std::string>()).string();
      cfg.program = load_program(cfg.program_path);
      return cfg;
    };
    sc.master = load_agent("master");
    sc.slave = load_agent("slave");

    const YAML::Node mission = root["mission"];
    if (mission) {
      sc.announce_at_ms.clear();
      if (mission["announce_at_ms"])
        sc.announce_at_ms.push_back(mission["announce_at_ms"].as<double>());
      if (mission["repeat_at_ms"])
        for (const YAML::Node& t : mission["repeat_at_ms"])
          sc.announce_at_ms.push_back(t.as<double>());
      if (sc.announce_at_ms.empty()) sc.announce_at_ms.push_back(300.0);
      if (mission["motor_speed"])
        sc.params.motor_speed = mission["motor_speed"].as<unsigned>();
      if (mission["mission_length_ms"])
        sc.params.mission_length_ms = mission["mission_length_ms"].as<std::uint64_t>();
    }

    if (root["actuation"]) {
      std::string mode = root["actuation"].as<std::string>();
      if (mode == "led") sc.actuation = ActuationMode::Led;
      else if (mode == "push") sc.actuation = ActuationMode::Push;
      else throw ScenarioError("actuation must be led or push");
    }

    if (root["costs"]) {
      for (const auto& entry : root["costs"]) {
        std::string action = entry.first.as<std::string>();
        const YAML::Node v = entry.second;
        energy::ActionCost cost;
        if (v["request_bytes"]) cost.request_bytes = v["request_bytes"].as<unsigned>();
        if (v["energy_uj"]) cost.energy_uj = v["energy_uj"].as<double>();
        if (v["duration_ms"]) cost.duration_ms = v["duration_ms"].as<double>();
        if (v["sigma_uj"]) cost.sigma_uj = v["sigma_uj"].as<double>();
        sc.costs.set(action, cost);
      }
    }

    const YAML::Node phys = root["physics"];
    if (phys) {
      if (phys["enabled"]) sc.physics.enabled = phys["enabled"].as<bool>();
      if (phys["debris"]) {
        if (phys["debris"]["mass_kg"])
          sc.physics.debris.mass_kg = phys["debris"]["mass_kg"].as<double>();
        if (phys["debris"]["inertia_kgm2"])
          sc.physics.debris.inertia_kgm2 = phys["debris"]["inertia_kgm2"].as<double>();
      }
      if (phys["contact_offset_m"])
        sc.physics.contact_offset_m = phys["contact_offset_m"].as<double>();
      if (phys["force_max_n"])
        sc.physics.force_max_n = phys["force_max_n"].as<double>();
      if (phys["dt_ms"]) sc.physics.dt_ms = phys["dt_ms"].as<double>();
    }

    const YAML::Node trace = root["trace"];
    if (trace) {
      if (trace["fs_hz"]) sc.trace.fs_hz = trace["fs_hz"].as<double>();
      if (trace["supply_v"]) sc.trace.supply_v = trace["supply_v"].as<double>();
      if (trace["idle_ma"]) sc.trace.idle_ma = trace["idle_ma"].as<double>();
    }

    if (root["drift_limit_ppm"])
      sc.drift_limit_ppm = root["drift_limit_ppm"].as<double>();
  } catch (const YAML::Exception& e) {
    throw ScenarioError("scenario " + path + ": " + e.what());
  }

  sc.validate();
  return sc;
}

}  // namespace ffsim::mission
