#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace ffsim::mothership {

struct MissionParams {
  unsigned motor_speed = 0;        // percent, 0..100
  std::uint64_t mission_length_ms = 0;

  bool valid() const { return motor_speed <= 100 && mission_length_ms > 0; }
  bool operator==(const MissionParams&) const = default;
};

/// Mission payloads are comma-separated `key:value` ASCII with keys
/// {speed, len, start} and base-10 integer values.
///
/// Uplink start registration carries whole seconds (`start:5`), keeping the
/// registration request compact; the server stores and reports milliseconds
/// (`start:5000`).
struct PutParams {
  MissionParams params;
};
struct PutStart {
  std::uint64_t start_time_ms = 0;
};
struct PayloadError {
  std::string reason;
};

using PutPayload = std::variant<PutParams, PutStart, PayloadError>;

PutPayload parse_mission_put(const std::string& text);

/// Contents of a /mission GET response.
struct MissionRecordView {
  MissionParams params;
  std::optional<std::uint64_t> start_time_ms;
};

std::optional<MissionRecordView> parse_mission_record(const std::string& text);

std::string format_mission_record(const MissionParams& params,
                                  std::optional<std::uint64_t> start_time_ms);

std::string format_params_payload(const MissionParams& params);
std::string format_start_payload(std::uint64_t start_time_ms);

}  // namespace ffsim::mothership
