#include "ffsim/coap/match.hpp"

namespace ffsim::coap {

std::optional<MatchResult> match_response(const std::set<RequestKey>& outstanding,
                                          const Message& m,
                                          const simnet::NodeId& peer) {
  if (m.type == Type::Reset) {
    for (const RequestKey& key : outstanding)
      if (key.peer == peer && key.message_id == m.message_id)
        return MatchResult{key, true};
    return std::nullopt;
  }
  if (m.type != Type::Ack) return std::nullopt;
  RequestKey probe{peer, m.message_id, m.token};
  auto it = outstanding.find(probe);
  if (it == outstanding.end()) return std::nullopt;
  return MatchResult{*it, false};
}

}  // namespace ffsim::coap
