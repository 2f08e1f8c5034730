#include "ffsim/energy/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ffsim::energy {

CurrentTrace synth_trace(const std::vector<ChargedAction>& events,
                         const TraceConfig& config) {
  if (config.fs_hz <= 0.0) throw ConfigError("sampling rate must be positive");
  if (config.supply_v <= 0.0) throw ConfigError("supply voltage must be positive");

  struct Pulse {
    double start_ms, end_ms, amplitude_ma;
  };
  std::vector<Pulse> pulses;
  for (const ChargedAction& ev : events) {
    if (ev.energy_uj <= 0.0 || ev.duration_ms <= 0.0) continue;
    Pulse p;
    p.start_ms = ev.at_ms;
    p.end_ms = ev.at_ms + ev.duration_ms;
    p.amplitude_ma = ev.energy_uj / (config.supply_v * ev.duration_ms);
    pulses.push_back(p);
  }
  std::sort(pulses.begin(), pulses.end(),
            [](const Pulse& a, const Pulse& b) { return a.start_ms < b.start_ms; });
  for (std::size_t i = 1; i < pulses.size(); ++i) {
    if (pulses[i].start_ms < pulses[i - 1].end_ms)
      throw ConfigError("overlapping action pulses: one action in flight at a time");
  }

  double t_end = config.t_end_ms;
  if (t_end <= config.t0_ms) {
    t_end = config.t0_ms;
    for (const Pulse& p : pulses) t_end = std::max(t_end, p.end_ms);
    t_end += 100.0;
  }

  CurrentTrace trace;
  trace.fs_hz = config.fs_hz;
  trace.t0_ms = config.t0_ms;
  const double step_ms = 1000.0 / config.fs_hz;
  std::size_t n = static_cast<std::size_t>(
      std::floor((t_end - config.t0_ms) / step_ms)) + 1;
  trace.samples_ma.resize(n, config.idle_ma);

  for (const Pulse& p : pulses) {
    auto first = static_cast<std::ptrdiff_t>(
        std::ceil((p.start_ms - config.t0_ms) / step_ms));
    if (first < 0) first = 0;
    for (std::size_t i = static_cast<std::size_t>(first); i < n; ++i) {
      double t = trace.sample_time_ms(i);
      if (t >= p.end_ms) break;
      trace.samples_ma[i] = config.idle_ma + p.amplitude_ma;
    }
  }
  return trace;
}

void write_trace_csv(std::ostream& os, const CurrentTrace& trace) {
  os << "t_ms,current_ma\n";
  char line[80];
  for (std::size_t i = 0; i < trace.samples_ma.size(); ++i) {
    std::snprintf(line, sizeof line, "%.3f,%.12g\n", trace.sample_time_ms(i),
                  trace.samples_ma[i]);
    os << line;
  }
}

CurrentTrace read_trace_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("t_ms,current_ma", 0) != 0)
    throw ConfigError("trace csv must start with header t_ms,current_ma");

  CurrentTrace trace;
  std::vector<double> times;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError("trace csv row without comma: " + line);
    times.push_back(std::stod(line.substr(0, comma)));
    trace.samples_ma.push_back(std::stod(line.substr(comma + 1)));
  }
  if (times.size() >= 2) {
    double dt_ms = (times.back() - times.front()) /
                   static_cast<double>(times.size() - 1);
    trace.fs_hz = 1000.0 / dt_ms;
    trace.t0_ms = times.front();
  }
  return trace;
}

}  // namespace ffsim::energy
