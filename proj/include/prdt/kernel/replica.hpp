#pragma once

#include <compare>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace prdt {

// Opaque process identifier; ordered lexicographically.
struct ReplicaId {
  std::string value;

  ReplicaId() = default;
  ReplicaId(std::string v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ReplicaId(const char* v) : value(v) {}             // NOLINT(google-explicit-constructor)

  const std::string& str() const { return value; }

  friend bool operator==(const ReplicaId&, const ReplicaId&) = default;
  friend auto operator<=>(const ReplicaId&, const ReplicaId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const ReplicaId& id) { return os << id.value; }
};

inline void to_json(nlohmann::json& j, const ReplicaId& id) { j = id.value; }
inline void from_json(const nlohmann::json& j, ReplicaId& id) { id.value = j.get<std::string>(); }

// A configuration of processes. Decisions need a strict majority of members.
struct Membership {
  std::set<ReplicaId> members;

  Membership() = default;
  Membership(std::initializer_list<ReplicaId> init) : members(init) {}
  explicit Membership(std::set<ReplicaId> init) : members(std::move(init)) {}

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  bool contains(const ReplicaId& id) const { return members.contains(id); }
  std::size_t quorum() const { return members.size() / 2 + 1; }

  void require_nonempty() const {
    if (members.empty()) throw std::invalid_argument("membership must not be empty");
  }

  friend bool operator==(const Membership&, const Membership&) = default;
  friend auto operator<=>(const Membership&, const Membership&) = default;
};

inline void to_json(nlohmann::json& j, const Membership& m) { j = m.members; }
inline void from_json(const nlohmann::json& j, Membership& m) {
  m.members = j.get<std::set<ReplicaId>>();
}

// What a protocol action knows about the process executing it.
struct ReplicaContext {
  ReplicaId replica_id;
  Membership membership;
};

}  // namespace prdt

template <>
struct std::hash<prdt::ReplicaId> {
  std::size_t operator()(const prdt::ReplicaId& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
