#include "ffsim/coap/message.hpp"

#include <cstdio>

namespace ffsim::coap {

std::string Message::payload_text() const {
  return std::string(payload.begin(), payload.end());
}

std::string Message::uri_path() const {
  std::string path;
  for (const Option& o : options) {
    if (o.number != kOptionUriPath) continue;
    if (!path.empty()) path.push_back('/');
    path.append(o.value.begin(), o.value.end());
  }
  return path;
}

std::string code_name(Code c) {
  switch (c) {
    case Code::Empty: return "0.00";
    case Code::Get: return "GET";
    case Code::Put: return "PUT";
    case Code::Created: return "2.01";
    case Code::Changed: return "2.04";
    case Code::Content: return "2.05";
    case Code::BadRequest: return "4.00";
    case Code::NotFound: return "4.04";
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "%u.%02u", static_cast<unsigned>(c) >> 5,
                static_cast<unsigned>(c) & 0x1f);
  return buf;
}

std::string type_name(Type t) {
  switch (t) {
    case Type::Confirmable: return "CON";
    case Type::NonConfirmable: return "NON";
    case Type::Ack: return "ACK";
    case Type::Reset: return "RST";
  }
  return "?";
}

bool is_known_code(std::uint8_t byte) {
  switch (static_cast<Code>(byte)) {
    case Code::Empty:
    case Code::Get:
    case Code::Put:
    case Code::Created:
    case Code::Changed:
    case Code::Content:
    case Code::BadRequest:
    case Code::NotFound:
      return true;
  }
  return false;
}

std::string Message::summary() const {
  std::string s = type_name(type);
  s += ' ';
  s += code_name(code);
  std::string path = uri_path();
  if (!path.empty()) {
    s += " /";
    s += path;
  }
  return s;
}

Message make_request(Type type, Code code, std::uint16_t mid,
                     const std::string& path, const std::string& payload) {
  Message m;
  m.type = type;
  m.code = code;
  m.message_id = mid;
  m.options.push_back(
      Option{kOptionUriPath, std::vector<std::uint8_t>(path.begin(), path.end())});
  m.payload.assign(payload.begin(), payload.end());
  return m;
}

Message make_response(const Message& request, Code code,
                      const std::string& payload) {
  Message m;
  m.type = request.type == Type::Confirmable ? Type::Ack : Type::NonConfirmable;
  m.code = code;
  m.message_id = request.message_id;
  m.token = request.token;
  m.payload.assign(payload.begin(), payload.end());
  return m;
}

Message make_empty_ack(std::uint16_t mid) {
  Message m;
  m.type = Type::Ack;
  m.code = Code::Empty;
  m.message_id = mid;
  return m;
}

}  // namespace ffsim::coap
