#include "ffsim/mothership/server.hpp"

namespace ffsim::mothership {

const char* phase_name(MissionPhase p) {
  switch (p) {
    case MissionPhase::Idle: return "idle";
    case MissionPhase::Announced: return "announced";
    case MissionPhase::Scheduled: return "scheduled";
    case MissionPhase::Running: return "running";
    case MissionPhase::Done: return "done";
  }
  return "?";
}

coap::Message Server::handle_request(const coap::Message& request,
                                     const simnet::NodeId& from, double now_ms) {
  if (request.type == coap::Type::Confirmable) {
    auto key = std::make_pair(from, request.message_id);
    auto cached = replay_cache_.find(key);
    if (cached != replay_cache_.end()) return cached->second;
    coap::Message response = dispatch(request, from, now_ms);
    replay_cache_.emplace(key, response);
    return response;
  }
  return dispatch(request, from, now_ms);
}

coap::Message Server::dispatch(const coap::Message& request,
                               const simnet::NodeId& from, double now_ms) {
  const std::string path = request.uri_path();

  if (path == "mission") {
    if (request.code == coap::Code::Get) {
      auto payload = get_mission();
      if (!payload) return coap::make_response(request, coap::Code::NotFound);
      return coap::make_response(request, coap::Code::Content, *payload);
    }
    if (request.code == coap::Code::Put) {
      PutPayload parsed = parse_mission_put(request.payload_text());
      if (const PutParams* p = std::get_if<PutParams>(&parsed)) {
        if (!put_mission_params(p->params, now_ms))
          return coap::make_response(request, coap::Code::BadRequest,
                                     "mission already in progress");
        return coap::make_response(request, coap::Code::Changed);
      }
      if (const PutStart* s = std::get_if<PutStart>(&parsed)) {
        if (!put_start_time(s->start_time_ms, now_ms))
          return coap::make_response(request, coap::Code::BadRequest,
                                     "start rejected");
        return coap::make_response(request, coap::Code::Changed);
      }
      return coap::make_response(request, coap::Code::BadRequest,
                                 std::get<PayloadError>(parsed).reason);
    }
    return coap::make_response(request, coap::Code::BadRequest);
  }

  if (path == "logging") {
    if (request.code == coap::Code::Put) {
      put_log(from, request.payload_text(), now_ms);
      return coap::make_response(request, coap::Code::Changed);
    }
    // Write-only sink; reads are not served.
    return coap::make_response(request, coap::Code::NotFound);
  }

  return coap::make_response(request, coap::Code::NotFound);
}

bool Server::put_mission_params(const MissionParams& params, double) {
  if (record_.phase != MissionPhase::Idle) return false;
  if (!params.valid()) return false;
  record_.params = params;
  record_.phase = MissionPhase::Announced;
  return true;
}

bool Server::put_start_time(std::uint64_t start_time_ms, double now_ms) {
  if (record_.phase != MissionPhase::Announced) return false;
  if (static_cast<double>(start_time_ms) <= now_ms) return false;
  record_.start_time_ms = start_time_ms;
  record_.phase = MissionPhase::Scheduled;
  return true;
}

std::optional<std::string> Server::get_mission() const {
  if (record_.phase == MissionPhase::Idle || !record_.params) return std::nullopt;
  return format_mission_record(*record_.params, record_.start_time_ms);
}

void Server::put_log(const simnet::NodeId& from, std::string payload,
                     double now_ms) {
  log_.push_back(LogEntry{from, now_ms, std::move(payload)});
}

std::optional<MissionPhase> Server::tick(double now_ms) {
  switch (record_.phase) {
    case MissionPhase::Scheduled:
      if (record_.start_time_ms &&
          now_ms >= static_cast<double>(*record_.start_time_ms)) {
        record_.phase = MissionPhase::Running;
        return record_.phase;
      }
      return std::nullopt;
    case MissionPhase::Running: {
      double end = static_cast<double>(*record_.start_time_ms) +
                   static_cast<double>(record_.params->mission_length_ms);
      if (now_ms >= end) {
        record_.phase = MissionPhase::Done;
        return record_.phase;
      }
      return std::nullopt;
    }
    case MissionPhase::Done:
      // Reset for repetition; the log is retained.
      record_.params.reset();
      record_.start_time_ms.reset();
      record_.phase = MissionPhase::Idle;
      return record_.phase;
    case MissionPhase::Idle:
    case MissionPhase::Announced:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace ffsim::mothership
