#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "ffsim/coap/message.hpp"
#include "ffsim/simnet/node_id.hpp"

namespace ffsim::coap {

/// Identity of an outstanding confirmable request.
struct RequestKey {
  simnet::NodeId peer;
  std::uint16_t message_id = 0;
  std::vector<std::uint8_t> token;

  auto operator<=>(const RequestKey&) const = default;
};

struct MatchResult {
  RequestKey key;
  bool rejected = false;  // matched by an RST
};

/// Matches an incoming message against outstanding requests: piggybacked
/// responses match on (peer, message id, token); an RST matches on
/// (peer, message id) and flags the exchange rejected. Unmatched messages
/// yield nullopt (caller logs and drops).
std::optional<MatchResult> match_response(const std::set<RequestKey>& outstanding,
                                          const Message& m,
                                          const simnet::NodeId& peer);

}  // namespace ffsim::coap
