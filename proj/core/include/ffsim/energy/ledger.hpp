#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ffsim/energy/cost.hpp"

namespace ffsim::energy {

struct ChargedAction {
  std::string action;
  double at_ms = 0.0;        // dispatch time on the global timeline
  double energy_uj = 0.0;
  double duration_ms = 0.0;
};

/// Per-agent energy/time accounting. Totals are exact sums of the charged
/// table entries, in charge order.
class Ledger {
public:
  explicit Ledger(const CostTable& table) : table_(&table) {}

  /// Charges one action at its dispatch time.
  const ChargedAction& charge(const std::string& action, double at_ms,
                              double jitter_draw = 0.0);

  double total_energy_uj() const { return energy_uj_; }
  double total_busy_ms() const { return busy_ms_; }
  const std::vector<ChargedAction>& events() const { return events_; }
  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }
  std::uint64_t count(const std::string& action) const;

private:
  const CostTable* table_;
  std::vector<ChargedAction> events_;
  std::map<std::string, std::uint64_t> counts_;
  double energy_uj_ = 0.0;
  double busy_ms_ = 0.0;
};

}  // namespace ffsim::energy
