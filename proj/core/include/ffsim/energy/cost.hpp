#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffsim::energy {

/// Measured cost of one external action. Radio actions have positive
/// request sizes and energies; purely local actions (timers, scheduling)
/// carry zero-cost entries so every dispatched action is accounted for.
struct ActionCost {
  unsigned request_bytes = 0;  // total on-air size of the request frame
  double energy_uj = 0.0;
  double duration_ms = 0.0;
  double sigma_uj = 0.0;  // optional spread; 0 = deterministic mean

  bool valid() const {
    return energy_uj >= 0.0 && duration_ms >= 0.0 && sigma_uj >= 0.0;
  }
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class CostTable {
public:
  /// Bench-measured defaults for the mission protocol actions.
  static CostTable defaults();

  void set(const std::string& action, ActionCost cost);
  bool contains(const std::string& action) const;
  const ActionCost& at(const std::string& action) const;

  /// Scenario-load validation: every action an agent program can dispatch
  /// must have an entry.
  void require_all(const std::vector<std::string>& actions) const;

  const std::map<std::string, ActionCost>& entries() const { return entries_; }

private:
  std::map<std::string, ActionCost> entries_;
};

}  // namespace ffsim::energy
