#include "ffsim/mothership/payload.hpp"

#include <cctype>
#include <vector>

namespace ffsim::mothership {

namespace {

struct KeyValue {
  std::string key;
  std::uint64_t value = 0;
};

std::optional<std::vector<KeyValue>> split_pairs(const std::string& text) {
  std::vector<KeyValue> pairs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= item.size())
      return std::nullopt;
    KeyValue kv;
    kv.key = item.substr(0, colon);
    std::string digits = item.substr(colon + 1);
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    if (digits.size() > 15) return std::nullopt;
    kv.value = std::stoull(digits);
    pairs.push_back(std::move(kv));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return pairs;
}

}  // namespace

PutPayload parse_mission_put(const std::string& text) {
  auto pairs = split_pairs(text);
  if (!pairs || pairs->empty())
    return PayloadError{"malformed key:value payload"};

  if (pairs->size() == 1 && (*pairs)[0].key == "start")
    return PutStart{(*pairs)[0].value * 1000};

  if (pairs->size() == 2 && (*pairs)[0].key == "speed" && (*pairs)[1].key == "len") {
    MissionParams p;
    if ((*pairs)[0].value > 100)
      return PayloadError{"speed above 100 percent"};
    p.motor_speed = static_cast<unsigned>((*pairs)[0].value);
    p.mission_length_ms = (*pairs)[1].value;
    if (p.mission_length_ms == 0)
      return PayloadError{"mission length must be positive"};
    return PutParams{p};
  }
  return PayloadError{"expected speed:<v>,len:<v> or start:<v>"};
}

std::optional<MissionRecordView> parse_mission_record(const std::string& text) {
  auto pairs = split_pairs(text);
  if (!pairs) return std::nullopt;
  if (pairs->size() < 2 || (*pairs)[0].key != "speed" || (*pairs)[1].key != "len")
    return std::nullopt;
  MissionRecordView view;
  view.params.motor_speed = static_cast<unsigned>((*pairs)[0].value);
  view.params.mission_length_ms = (*pairs)[1].value;
  if (pairs->size() == 3 && (*pairs)[2].key == "start") {
    view.start_time_ms = (*pairs)[2].value;
  } else if (pairs->size() != 2) {
    return std::nullopt;
  }
  return view;
}

std::string format_mission_record(const MissionParams& params,
                                  std::optional<std::uint64_t> start_time_ms) {
  std::string out = format_params_payload(params);
  if (start_time_ms) {
    out += ",start:";
    out += std::to_string(*start_time_ms);
  }
  return out;
}

std::string format_params_payload(const MissionParams& params) {
  return "speed:" + std::to_string(params.motor_speed) +
         ",len:" + std::to_string(params.mission_length_ms);
}

std::string format_start_payload(std::uint64_t start_time_ms) {
  // Uplink compact form: whole seconds.
  return "start:" + std::to_string(start_time_ms / 1000);
}

}  // namespace ffsim::mothership
