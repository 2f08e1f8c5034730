#include "ffsim/energy/cost.hpp"

namespace ffsim::energy {

CostTable CostTable::defaults() {
  CostTable t;
  t.set("listen_gs", ActionCost{70, 271.0, 14.7, 0.0});
  t.set("announce_perform_mission", ActionCost{78, 294.0, 14.7, 0.0});
  t.set("listen_server", ActionCost{70, 276.0, 14.9, 0.0});
  t.set("wait_poll", ActionCost{0, 0.0, 0.0, 0.0});
  t.set("schedule_actuation", ActionCost{0, 0.0, 0.0, 0.0});
  return t;
}

void CostTable::set(const std::string& action, ActionCost cost) {
  if (!cost.valid())
    throw ConfigError("invalid cost entry for action '" + action + "'");
  entries_[action] = cost;
}

bool CostTable::contains(const std::string& action) const {
  return entries_.count(action) > 0;
}

const ActionCost& CostTable::at(const std::string& action) const {
  auto it = entries_.find(action);
  if (it == entries_.end())
    throw ConfigError("no cost entry for action '" + action + "'");
  return it->second;
}

void CostTable::require_all(const std::vector<std::string>& actions) const {
  for (const std::string& a : actions)
    if (!contains(a))
      throw ConfigError("agent program uses action '" + a +
                        "' with no cost table entry");
}

}  // namespace ffsim::energy
