#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ffsim::coap {

enum class Type : std::uint8_t { Confirmable = 0, NonConfirmable = 1, Ack = 2, Reset = 3 };

/// Code byte = class << 5 | detail. Only the subset used by the mission
/// protocol is admitted by the codec.
enum class Code : std::uint8_t {
  Empty = 0x00,
  Get = 0x01,
  Put = 0x03,
  Created = 0x41,   // 2.01
  Changed = 0x44,   // 2.04
  Content = 0x45,   // 2.05
  BadRequest = 0x80, // 4.00
  NotFound = 0x84,  // 4.04
};

constexpr std::uint16_t kOptionUriPath = 11;
constexpr std::uint16_t kOptionContentFormat = 12;

/// Confirmable retransmission policy: fixed interval, fixed retry budget.
constexpr double kAckTimeoutMs = 2000.0;
constexpr int kMaxRetransmits = 4;

struct Option {
  std::uint16_t number = 0;
  std::vector<std::uint8_t> value;

  bool operator==(const Option&) const = default;
};

struct Message {
  std::uint8_t version = 1;
  Type type = Type::Confirmable;
  Code code = Code::Empty;
  std::uint16_t message_id = 0;
  std::vector<std::uint8_t> token;    // 0..8 bytes
  std::vector<Option> options;        // sorted ascending by number
  std::vector<std::uint8_t> payload;

  bool operator==(const Message&) const = default;

  bool is_request() const { return code == Code::Get || code == Code::Put; }
  std::string payload_text() const;
  /// Joined Uri-Path segments, e.g. "mission".
  std::string uri_path() const;
  /// Human-readable one-liner, e.g. "CON GET /mission" or "ACK 2.05".
  std::string summary() const;
};

std::string code_name(Code c);
std::string type_name(Type t);
bool is_known_code(std::uint8_t byte);

Message make_request(Type type, Code code, std::uint16_t mid,
                     const std::string& path,
                     const std::string& payload = std::string());
Message make_response(const Message& request, Code code,
                      const std::string& payload = std::string());
Message make_empty_ack(std::uint16_t mid);

}  // namespace ffsim::coap
