#pragma once

#include <cmath>
#include <cstdint>

namespace ffsim::simnet {

/// Global simulation time is carried as integer microseconds; public
/// interfaces speak milliseconds.
using TimeUs = std::int64_t;

constexpr TimeUs ms_to_us(double ms) {
  return static_cast<TimeUs>(std::llround(ms * 1000.0));
}

constexpr double us_to_ms(TimeUs us) { return static_cast<double>(us) / 1000.0; }

/// Per-node local time model: a fixed offset plus a linear drift.
///   local_ms = global_ms + offset_ms + drift_ppm * global_ms / 1e6
struct NodeClock {
  double offset_ms = 0.0;
  double drift_ppm = 0.0;

  double local_now_ms(TimeUs global) const {
    double g = us_to_ms(global);
    return g + offset_ms + drift_ppm * g / 1e6;
  }

  /// Global instant at which this clock reads `local_ms`.
  TimeUs local_to_global_us(double local_ms) const {
    double g = (local_ms - offset_ms) / (1.0 + drift_ppm / 1e6);
    return ms_to_us(g);
  }

  /// Global duration corresponding to a span measured on this clock.
  TimeUs local_duration_us(double duration_ms) const {
    return ms_to_us(duration_ms / (1.0 + drift_ppm / 1e6));
  }
};

}  // namespace ffsim::simnet
