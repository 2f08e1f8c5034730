#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffsim/agentspeak/ast.hpp"
#include "ffsim/energy/cost.hpp"
#include "ffsim/energy/trace.hpp"
#include "ffsim/mothership/payload.hpp"
#include "ffsim/physics/body.hpp"
#include "ffsim/simnet/clock.hpp"
#include "ffsim/simnet/engine.hpp"
#include "ffsim/simnet/node_id.hpp"

namespace ffsim::mission {

class ScenarioError : public std::runtime_error {
public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

enum class ActuationMode { Led, Push };

struct AgentConfig {
  simnet::NodeClock clock;
  double boot_ms = 0.0;
  std::string program_path;
  std::shared_ptr<const agentspeak::AgentProgram> program;
};

struct LinkOverride {
  simnet::NodeId a;
  simnet::NodeId b;
  simnet::LinkModel link;
};

struct PhysicsConfig {
  bool enabled = true;
  physics::RigidBody2D debris;
  double contact_offset_m = 0.11;
  double force_max_n = 0.5;
  double dt_ms = 1.0;
};

struct Scenario {
  std::string name = "default";
  std::uint64_t seed = 42;
  double t_end_ms = 10000.0;

  simnet::LinkModel link;
  std::vector<LinkOverride> link_overrides;

  simnet::NodeClock mothership_clock;
  AgentConfig master;
  AgentConfig slave;
  double base_boot_ms = 0.0;

  /// Announce instants for the base station (one mission each).
  std::vector<double> announce_at_ms{300.0};
  mothership::MissionParams params{40, 1500};

  ActuationMode actuation = ActuationMode::Push;
  energy::CostTable costs = energy::CostTable::defaults();
  PhysicsConfig physics;
  energy::TraceConfig trace;

  double drift_limit_ppm = 200.0;

  /// Cross-field checks: clocks within the drift bound, programs loaded,
  /// cost entries for every program action, valid mission parameters.
  void validate() const;
};

/// Loads a scenario from the nested key-value file format (see the annotated
/// scenarios/default.yaml). Program paths resolve relative to the scenario
/// file. Throws ScenarioError with the offending key on malformed input.
Scenario load_scenario(const std::string& path);

/// Canonical node identities used by every scenario.
namespace nodes {
inline constexpr simnet::NodeId base{simnet::Role::BaseStation, 0};
inline constexpr simnet::NodeId mothership{simnet::Role::Mothership, 0};
inline constexpr simnet::NodeId master{simnet::Role::MasterFF, 0};
inline constexpr simnet::NodeId slave{simnet::Role::SlaveFF, 0};
inline constexpr simnet::NodeId debris{simnet::Role::Debris, 0};
}  // namespace nodes

/// Parses a node name as used in scenario files ("base", "mothership",
/// "master", "slave").
std::optional<simnet::NodeId> node_by_name(const std::string& name);

}  // namespace ffsim::mission
