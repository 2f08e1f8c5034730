#include "ffsim/coap/codec.hpp"

#include <cctype>

namespace ffsim::coap {

namespace {

// Option deltas and lengths share the nibble + extension encoding.
void encode_option_field(std::vector<std::uint8_t>& out, std::size_t nibble_pos,
                         unsigned value, bool is_delta) {
  if (value < 13) {
    out[nibble_pos] |= static_cast<std::uint8_t>(is_delta ? value << 4 : value);
  } else if (value < 269) {
    out[nibble_pos] |= static_cast<std::uint8_t>(is_delta ? 13 << 4 : 13);
    out.push_back(static_cast<std::uint8_t>(value - 13));
  } else {
    out[nibble_pos] |= static_cast<std::uint8_t>(is_delta ? 14 << 4 : 14);
    unsigned ext = value - 269;
    out.push_back(static_cast<std::uint8_t>(ext >> 8));
    out.push_back(static_cast<std::uint8_t>(ext & 0xff));
  }
}

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t take(DecodeErrorKind kind, const char* what) {
    if (pos_ >= bytes_.size()) throw DecodeError(kind, what, pos_);
    return bytes_[pos_++];
  }

  std::vector<std::uint8_t> take_n(std::size_t n, DecodeErrorKind kind,
                                   const char* what) {
    if (remaining() < n) throw DecodeError(kind, what, pos_);
    std::vector<std::uint8_t> out(bytes_.begin() + pos_, bytes_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

unsigned decode_option_field(Reader& r, unsigned nibble, const char* what) {
  if (nibble < 13) return nibble;
  if (nibble == 13)
    return 13u + r.take(DecodeErrorKind::TruncatedOption, what);
  // nibble == 14
  unsigned hi = r.take(DecodeErrorKind::TruncatedOption, what);
  unsigned lo = r.take(DecodeErrorKind::TruncatedOption, what);
  return 269u + (hi << 8) + lo;
}

}  // namespace

std::vector<std::uint8_t> encode_message(const Message& m) {
  if (m.version != 1) throw EncodeError("version must be 1");
  if (m.token.size() > 8) throw EncodeError("token longer than 8 bytes");
  if (!is_known_code(static_cast<std::uint8_t>(m.code)))
    throw EncodeError("code outside the protocol subset");
  if (m.code == Code::Empty &&
      (!m.token.empty() || !m.options.empty() || !m.payload.empty()))
    throw EncodeError("0.00 message must be header-only");
  for (std::size_t i = 0; i < m.options.size(); ++i) {
    if (m.options[i].value.size() > 255)
      throw EncodeError("option value longer than 255 bytes");
    if (i > 0 && m.options[i].number < m.options[i - 1].number)
      throw EncodeError("options not sorted by number");
  }

  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(
      (1u << 6) | (static_cast<unsigned>(m.type) << 4) | m.token.size()));
  out.push_back(static_cast<std::uint8_t>(m.code));
  out.push_back(static_cast<std::uint8_t>(m.message_id >> 8));
  out.push_back(static_cast<std::uint8_t>(m.message_id & 0xff));
  out.insert(out.end(), m.token.begin(), m.token.end());

  unsigned previous = 0;
  for (const Option& opt : m.options) {
    std::size_t nibble_pos = out.size();
    out.push_back(0);
    encode_option_field(out, nibble_pos, opt.number - previous, true);
    encode_option_field(out, nibble_pos, static_cast<unsigned>(opt.value.size()),
                        false);
    out.insert(out.end(), opt.value.begin(), opt.value.end());
    previous = opt.number;
  }

  if (!m.payload.empty()) {
    out.push_back(0xff);
    out.insert(out.end(), m.payload.begin(), m.payload.end());
  }
  return out;
}

Message decode_message(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Message m;

  std::uint8_t b0 = r.take(DecodeErrorKind::TruncatedHeader, "missing header");
  unsigned version = b0 >> 6;
  if (version != 1)
    throw DecodeError(DecodeErrorKind::VersionMismatch,
                      "version " + std::to_string(version), 0);
  m.type = static_cast<Type>((b0 >> 4) & 0x3);
  unsigned tkl = b0 & 0x0f;
  if (tkl > 8)
    throw DecodeError(DecodeErrorKind::TokenLengthInvalid,
                      "token length " + std::to_string(tkl), 0);

  std::uint8_t code = r.take(DecodeErrorKind::TruncatedHeader, "missing code");
  if (!is_known_code(code))
    throw DecodeError(DecodeErrorKind::UnknownCode,
                      "code 0x" + to_hex({&code, 1}), 1);
  m.code = static_cast<Code>(code);
  if (m.code == Code::Empty && tkl != 0)
    throw DecodeError(DecodeErrorKind::EmptyCodeViolation,
                      "0.00 message with a token", 0);
  std::uint8_t mid_hi = r.take(DecodeErrorKind::TruncatedHeader, "missing message id");
  std::uint8_t mid_lo = r.take(DecodeErrorKind::TruncatedHeader, "missing message id");
  m.message_id = static_cast<std::uint16_t>((mid_hi << 8) | mid_lo);

  m.token = r.take_n(tkl, DecodeErrorKind::TruncatedToken, "truncated token");

  if (m.code == Code::Empty && !r.done())
    throw DecodeError(DecodeErrorKind::EmptyCodeViolation,
                      "0.00 message with extra bytes", r.pos());

  unsigned number = 0;
  while (!r.done()) {
    std::uint8_t lead = r.take(DecodeErrorKind::TruncatedOption, "option byte");
    if (lead == 0xff) {
      if (r.done())
        throw DecodeError(DecodeErrorKind::MissingPayload,
                          "payload marker with empty payload", r.pos());
      m.payload = r.take_n(r.remaining(), DecodeErrorKind::TruncatedOption, "");
      break;
    }
    unsigned delta_nibble = lead >> 4;
    unsigned length_nibble = lead & 0x0f;
    if (delta_nibble == 15 || length_nibble == 15)
      throw DecodeError(DecodeErrorKind::OptionNibbleReserved,
                        "reserved option nibble 15", r.pos() - 1);
    number += decode_option_field(r, delta_nibble, "option delta extension");
    unsigned length = decode_option_field(r, length_nibble, "option length extension");
    Option opt;
    opt.number = static_cast<std::uint16_t>(number);
    opt.value = r.take_n(length, DecodeErrorKind::TruncatedOption,
                         "truncated option value");
    m.options.push_back(std::move(opt));
  }
  return m;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  int hi = -1;
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw std::invalid_argument(std::string("invalid hex character '") + c + "'");
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<std::uint8_t>((hi << 4) | v));
      hi = -1;
    }
  }
  if (hi >= 0) throw std::invalid_argument("odd number of hex digits");
  return out;
}

}  // namespace ffsim::coap
