#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ffsim/energy/ledger.hpp"

namespace ffsim::energy {

struct CurrentTrace {
  double fs_hz = 500.0;
  double t0_ms = 0.0;
  std::vector<double> samples_ma;

  double sample_time_ms(std::size_t i) const {
    return t0_ms + static_cast<double>(i) * 1000.0 / fs_hz;
  }
};

struct TraceConfig {
  double fs_hz = 500.0;
  double supply_v = 3.3;
  double idle_ma = 5.0;
  double t0_ms = 0.0;
  double t_end_ms = 0.0;  // 0 = last action end + 100 ms
};

/// Synthesizes the agent's current draw: a flat idle baseline plus one
/// rectangular pulse per charged action with
///   amplitude_mA = energy_uj / (supply_v * duration_ms)
/// so integrating pulse current times the supply voltage recovers the
/// charged energy up to one sample of quantization. Zero-energy actions
/// produce no pulse. Throws ConfigError when two pulses overlap (the agent
/// can only run one action at a time).
CurrentTrace synth_trace(const std::vector<ChargedAction>& events,
                         const TraceConfig& config);

/// CSV with header `t_ms,current_ma`.
void write_trace_csv(std::ostream& os, const CurrentTrace& trace);
CurrentTrace read_trace_csv(std::istream& is);

}  // namespace ffsim::energy
