#include "ffsim/energy/ledger.hpp"

namespace ffsim::energy {

const ChargedAction& Ledger::charge(const std::string& action, double at_ms,
                                    double jitter_draw) {
  const ActionCost& cost = table_->at(action);
  ChargedAction ev;
  ev.action = action;
  ev.at_ms = at_ms;
  ev.energy_uj = cost.energy_uj + cost.sigma_uj * jitter_draw;
  if (ev.energy_uj < 0.0) ev.energy_uj = 0.0;
  ev.duration_ms = cost.duration_ms;
  energy_uj_ += ev.energy_uj;
  busy_ms_ += ev.duration_ms;
  ++counts_[action];
  events_.push_back(std::move(ev));
  return events_.back();
}

std::uint64_t Ledger::count(const std::string& action) const {
  auto it = counts_.find(action);
  return it == counts_.end() ? 0 : it->second;
}

}  // namespace ffsim::energy
