#include "prdt/kv/wire.hpp"

#include <stdexcept>

namespace prdt::kv {

void to_json(nlohmann::json& j, const KvOperation& op) {
  j = {{"kind", op.kind == OpKind::write ? "write" : "read"}, {"key", op.key}, {"origin", op.origin}, {"seq", op.seq}};
  if (op.kind == OpKind::write) j["value"] = op.value;
}

void from_json(const nlohmann::json& j, KvOperation& op) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "write") {
    op.kind = OpKind::write;
    op.value = j.at("value").get<std::string>();
  } else if (kind == "read") {
    op.kind = OpKind::read;
    op.value.clear();
  } else {
    throw std::invalid_argument("unknown operation kind: " + kind);
  }
  op.key = j.at("key").get<std::string>();
  op.origin = j.at("origin").get<ReplicaId>();
  op.seq = j.at("seq").get<std::uint64_t>();
}

std::string to_string(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::delta: return "DELTA";
    case EnvelopeKind::sync_request: return "SYNC_REQUEST";
    case EnvelopeKind::sync_response: return "SYNC_RESPONSE";
  }
  return "?";
}

void to_json(nlohmann::json& j, const Envelope& e) {
  j = {{"sender", e.sender}, {"kind", to_string(e.kind)}, {"payload", e.payload}};
}

void from_json(const nlohmann::json& j, Envelope& e) {
  e.sender = j.at("sender").get<ReplicaId>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "DELTA") {
    e.kind = EnvelopeKind::delta;
  } else if (kind == "SYNC_REQUEST") {
    e.kind = EnvelopeKind::sync_request;
  } else if (kind == "SYNC_RESPONSE") {
    e.kind = EnvelopeKind::sync_response;
  } else {
    throw std::invalid_argument("unknown envelope kind: " + kind);
  }
  e.payload = j.value("payload", nlohmann::json{});
}

void to_json(nlohmann::json& j, const ClientRequest& r) {
  j = {{"op", r.op}, {"key", r.key}};
  if (r.value) j["value"] = *r.value;
}

void from_json(const nlohmann::json& j, ClientRequest& r) {
  r.op = j.at("op").get<std::string>();
  r.key = j.at("key").get<std::string>();
  r.value.reset();
  if (j.contains("value") && !j.at("value").is_null()) r.value = j.at("value").get<std::string>();
  if (r.op != "PUT" && r.op != "GET") throw std::invalid_argument("unknown op: " + r.op);
  if (r.op == "PUT" && !r.value) throw std::invalid_argument("PUT needs a value");
}

void to_json(nlohmann::json& j, const ClientResponse& r) {
  j = {{"status", r.status}};
  if (r.value) j["value"] = *r.value;
}

void from_json(const nlohmann::json& j, ClientResponse& r) {
  r.status = j.at("status").get<std::string>();
  r.value.reset();
  if (j.contains("value") && !j.at("value").is_null()) r.value = j.at("value").get<std::string>();
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw std::invalid_argument("expected host:port, got '" + text + "'");
  }
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in '" + text + "'");
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range in '" + text + "'");
  return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

}  // namespace prdt::kv
