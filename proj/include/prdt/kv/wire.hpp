#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "prdt/kernel/replica.hpp"

namespace prdt::kv {

enum class OpKind { write, read };

// One log entry. (origin, seq) makes every submitted operation distinct, so
// two identical PUTs from different requests are still different proposals.
struct KvOperation {
  OpKind kind = OpKind::read;
  std::string key;
  std::string value;
  ReplicaId origin;
  std::uint64_t seq = 0;

  static KvOperation write(std::string key, std::string value, ReplicaId origin = {}, std::uint64_t seq = 0) {
    return {OpKind::write, std::move(key), std::move(value), std::move(origin), seq};
  }
  static KvOperation read(std::string key, ReplicaId origin = {}, std::uint64_t seq = 0) {
    return {OpKind::read, std::move(key), {}, std::move(origin), seq};
  }

  bool same_request(const KvOperation& o) const { return origin == o.origin && seq == o.seq; }

  friend bool operator==(const KvOperation&, const KvOperation&) = default;
  friend auto operator<=>(const KvOperation&, const KvOperation&) = default;
};

void to_json(nlohmann::json& j, const KvOperation& op);
void from_json(const nlohmann::json& j, KvOperation& op);

enum class EnvelopeKind { delta, sync_request, sync_response };

std::string to_string(EnvelopeKind k);

// Peer frame: {sender, kind, payload}.
struct Envelope {
  ReplicaId sender;
  EnvelopeKind kind = EnvelopeKind::delta;
  nlohmann::json payload;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

void to_json(nlohmann::json& j, const Envelope& e);
void from_json(const nlohmann::json& j, Envelope& e);

// Client frames: {op, key, value?} and {status, value?}.
struct ClientRequest {
  std::string op;  // "PUT" | "GET"
  std::string key;
  std::optional<std::string> value;

  static ClientRequest put(std::string key, std::string value) { return {"PUT", std::move(key), std::move(value)}; }
  static ClientRequest get(std::string key) { return {"GET", std::move(key), std::nullopt}; }

  friend bool operator==(const ClientRequest&, const ClientRequest&) = default;
};

struct ClientResponse {
  std::string status;  // "OK" | "VALUE" | "NOT_FOUND" | "ERROR"
  std::optional<std::string> value;

  static ClientResponse ok() { return {"OK", std::nullopt}; }
  static ClientResponse found(std::string v) { return {"VALUE", std::move(v)}; }
  static ClientResponse not_found() { return {"NOT_FOUND", std::nullopt}; }
  static ClientResponse error(std::string why) { return {"ERROR", std::move(why)}; }

  friend bool operator==(const ClientResponse&, const ClientResponse&) = default;
};

void to_json(nlohmann::json& j, const ClientRequest& r);
// Throws std::invalid_argument on an unknown op or a PUT without value.
void from_json(const nlohmann::json& j, ClientRequest& r);
void to_json(nlohmann::json& j, const ClientResponse& r);
void from_json(const nlohmann::json& j, ClientResponse& r);

// "host:port" -> (host, port). Throws std::invalid_argument.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text);

}  // namespace prdt::kv
