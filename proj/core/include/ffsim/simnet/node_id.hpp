#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ffsim::simnet {

enum class Role : std::uint8_t { BaseStation, Mothership, MasterFF, SlaveFF, Debris };

struct NodeId {
  Role role = Role::Mothership;
  std::uint8_t index = 0;

  auto operator<=>(const NodeId&) const = default;

  /// Stable short name used in logs: base, mothership, master, slave, debris
  /// (suffixed with the index when nonzero).
  std::string name() const;
};

inline const char* role_name(Role r) {
  switch (r) {
    case Role::BaseStation: return "base";
    case Role::Mothership: return "mothership";
    case Role::MasterFF: return "master";
    case Role::SlaveFF: return "slave";
    case Role::Debris: return "debris";
  }
  return "?";
}

inline std::string NodeId::name() const {
  std::string n = role_name(role);
  if (index != 0) n += std::to_string(index);
  return n;
}

}  // namespace ffsim::simnet
