#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffsim/coap/message.hpp"

namespace ffsim::coap {

/// The message violates a type invariant and cannot be put on the wire.
class EncodeError : public std::runtime_error {
public:
  explicit EncodeError(const std::string& rule)
      : std::runtime_error("coap encode: " + rule) {}
};

enum class DecodeErrorKind {
  TruncatedHeader,
  VersionMismatch,
  TokenLengthInvalid,
  TruncatedToken,
  TruncatedOption,
  OptionNibbleReserved,   // delta/length nibble 15 outside the payload marker
  MissingPayload,         // trailing 0xFF with no payload bytes
  EmptyCodeViolation,     // 0.00 message carrying token/options/payload
  UnknownCode,
};

class DecodeError : public std::runtime_error {
public:
  DecodeError(DecodeErrorKind kind, const std::string& detail, std::size_t offset)
      : std::runtime_error("coap decode: " + detail + " (offset " +
                           std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  DecodeErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

private:
  DecodeErrorKind kind_;
  std::size_t offset_;
};

/// RFC 7252 section 3 framing: 4-byte header, token, delta-encoded options,
/// optional 0xFF + payload. Deterministic: equal messages encode to equal
/// bytes.
std::vector<std::uint8_t> encode_message(const Message& m);

/// Inverse of encode_message on its range. Never reads past the input;
/// malformed inputs raise DecodeError with a distinct kind.
Message decode_message(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Accepts hex with optional whitespace between digits.
std::vector<std::uint8_t> from_hex(const std::string& hex);

}  // namespace ffsim::coap
