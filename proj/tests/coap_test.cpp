#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ffsim/coap/codec.hpp"
#include "ffsim/coap/match.hpp"

using namespace ffsim;
using namespace ffsim::coap;

namespace {

Message canonical_get_mission() {
  return make_request(Type::Confirmable, Code::Get, 0x1234, "mission");
}

std::mt19937_64 g_rng(987654321);

Message random_valid_message() {
  Message m;
  m.type = static_cast<Type>(g_rng() % 4);
  static const Code codes[] = {Code::Get,     Code::Put,      Code::Created,
                               Code::Changed, Code::Content,  Code::BadRequest,
                               Code::NotFound};
  m.code = codes[g_rng() % 7];
  m.message_id = static_cast<std::uint16_t>(g_rng());
  std::size_t tkl = g_rng() % 9;
  for (std::size_t i = 0; i < tkl; ++i)
    m.token.push_back(static_cast<std::uint8_t>(g_rng()));
  // Options restricted to the mission subset, kept sorted.
  if (g_rng() % 2) {
    Option uri;
    uri.number = kOptionUriPath;
    std::size_t len = g_rng() % 32;
    for (std::size_t i = 0; i < len; ++i)
      uri.value.push_back(static_cast<std::uint8_t>('a' + g_rng() % 26));
    m.options.push_back(std::move(uri));
  }
  if (g_rng() % 2) {
    Option cf;
    cf.number = kOptionContentFormat;
    if (g_rng() % 2) cf.value.push_back(0);
    m.options.push_back(std::move(cf));
  }
  std::size_t plen = g_rng() % 40;
  for (std::size_t i = 0; i < plen; ++i)
    m.payload.push_back(static_cast<std::uint8_t>(g_rng()));
  return m;
}

}  // namespace

TEST_CASE("encode: canonical GET /mission vector") {
  auto bytes = encode_message(canonical_get_mission());
  CHECK(to_hex(bytes) == "40011234b76d697373696f6e");
  CHECK(bytes.size() == 12);
}

TEST_CASE("encode: empty ACK vector") {
  auto bytes = encode_message(make_empty_ack(0x1234));
  CHECK(to_hex(bytes) == "60001234");
}

TEST_CASE("encode: piggybacked content vector") {
  Message m;
  m.type = Type::Ack;
  m.code = Code::Content;
  m.message_id = 0x1234;
  m.payload = {'0'};
  CHECK(to_hex(encode_message(m)) == "60451234ff30");
}

TEST_CASE("decode: canonical GET /mission vector") {
  auto bytes = from_hex("40 01 12 34 B7 6D 69 73 73 69 6F 6E");
  Message m = decode_message(bytes);
  CHECK(m == canonical_get_mission());
  CHECK(m.uri_path() == "mission");
  CHECK(m.summary() == "CON GET /mission");
}

TEST_CASE("decode: version error") {
  auto bytes = from_hex("80010001");
  CHECK_THROWS_AS(decode_message(bytes), DecodeError);
  try {
    decode_message(bytes);
  } catch (const DecodeError& e) {
    CHECK(e.kind() == DecodeErrorKind::VersionMismatch);
  }
}

TEST_CASE("decode: distinct malformed-input errors") {
  auto kind_of = [](const std::string& hex) {
    try {
      decode_message(from_hex(hex));
    } catch (const DecodeError& e) {
      return e.kind();
    }
    FAIL("expected DecodeError for ", hex);
    return DecodeErrorKind::TruncatedHeader;
  };

  CHECK(kind_of("400112") == DecodeErrorKind::TruncatedHeader);
  CHECK(kind_of("49011234aabbccdd") == DecodeErrorKind::TokenLengthInvalid);
  CHECK(kind_of("42011234aa") == DecodeErrorKind::TruncatedToken);
  CHECK(kind_of("40011234b76d69") == DecodeErrorKind::TruncatedOption);
  CHECK(kind_of("40011234f1") == DecodeErrorKind::OptionNibbleReserved);
  CHECK(kind_of("400112341f") == DecodeErrorKind::OptionNibbleReserved);
  CHECK(kind_of("40011234ff") == DecodeErrorKind::MissingPayload);
  CHECK(kind_of("60001234ff30") == DecodeErrorKind::EmptyCodeViolation);
  CHECK(kind_of("61001234aa") == DecodeErrorKind::EmptyCodeViolation);
  CHECK(kind_of("40201234") == DecodeErrorKind::UnknownCode);
}

TEST_CASE("decode: total on arbitrary bytes") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::uint8_t> junk(rng() % 64);
    for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
    try {
      (void)decode_message(junk);
    } catch (const DecodeError&) {
      // fine: total failure, no aborts
    }
  }
}

TEST_CASE("decode: truncations of a valid message never read past input") {
  Message m = make_request(Type::Confirmable, Code::Put, 0xBEEF, "mission",
                           "speed:40,len:1500");
  auto full = encode_message(m);
  for (std::size_t cut = 0; cut < full.size(); ++cut) {
    std::vector<std::uint8_t> prefix(full.begin(), full.begin() + cut);
    try {
      Message d = decode_message(prefix);
      // Short prefixes can still decode when they end on a boundary.
      CHECK(encode_message(d).size() == prefix.size());
    } catch (const DecodeError&) {
    }
  }
}

TEST_CASE("round trip: decode(encode(m)) == m over randomized messages") {
  for (int i = 0; i < 1500; ++i) {
    Message m = random_valid_message();
    auto bytes = encode_message(m);
    Message back = decode_message(bytes);
    CHECK(back == m);
  }
}

TEST_CASE("encode: invariant violations are named") {
  Message m = canonical_get_mission();
  m.token.resize(9, 0xaa);
  CHECK_THROWS_AS(encode_message(m), EncodeError);

  Message unsorted = canonical_get_mission();
  unsorted.options.insert(unsorted.options.begin(),
                          Option{kOptionContentFormat, {}});
  CHECK_THROWS_AS(encode_message(unsorted), EncodeError);

  Message empty_with_payload = make_empty_ack(7);
  empty_with_payload.payload = {'x'};
  CHECK_THROWS_AS(encode_message(empty_with_payload), EncodeError);

  Message big_option = canonical_get_mission();
  big_option.options[0].value.resize(256, 'a');
  CHECK_THROWS_AS(encode_message(big_option), EncodeError);
}

TEST_CASE("match_response: mid and token") {
  simnet::NodeId server{simnet::Role::Mothership, 0};
  simnet::NodeId other{simnet::Role::BaseStation, 0};
  RequestKey key{server, 0x77, {0x01}};
  std::set<RequestKey> outstanding{key};

  Message ack;
  ack.type = Type::Ack;
  ack.code = Code::Content;
  ack.message_id = 0x77;
  ack.token = {0x01};
  auto hit = match_response(outstanding, ack, server);
  REQUIRE(hit.has_value());
  CHECK(hit->key == key);
  CHECK_FALSE(hit->rejected);

  // Wrong token.
  ack.token = {0x02};
  CHECK_FALSE(match_response(outstanding, ack, server).has_value());
  ack.token = {0x01};
  // Wrong peer.
  CHECK_FALSE(match_response(outstanding, ack, other).has_value());

  // RST matches on mid alone and flags rejection.
  Message rst;
  rst.type = Type::Reset;
  rst.code = Code::Empty;
  rst.message_id = 0x77;
  auto rejected = match_response(outstanding, rst, server);
  REQUIRE(rejected.has_value());
  CHECK(rejected->rejected);
}

TEST_CASE("hex helpers") {
  CHECK(from_hex("4001 1234").size() == 4);
  CHECK(to_hex(from_hex("DEADBEEF")) == "deadbeef");
  CHECK_THROWS_AS(from_hex("40x"), std::invalid_argument);
  CHECK_THROWS_AS(from_hex("401"), std::invalid_argument);
}
