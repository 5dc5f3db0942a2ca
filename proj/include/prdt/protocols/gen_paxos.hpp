#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "prdt/lattice/grow_set.hpp"
#include "prdt/lattice/merge_map.hpp"
#include "prdt/protocols/paxos.hpp"

namespace prdt {

// Names one decision (not a process): the creating replica plus a per-replica
// counter.
struct DecisionUid {
  ReplicaId origin;
  std::uint64_t counter = 0;

  std::string str() const { return origin.value + "/" + std::to_string(counter); }

  friend bool operator==(const DecisionUid&, const DecisionUid&) = default;
  friend auto operator<=>(const DecisionUid&, const DecisionUid&) = default;
};

inline void to_json(nlohmann::json& j, const DecisionUid& u) { j = nlohmann::json::array({u.origin, u.counter}); }
inline void from_json(const nlohmann::json& j, DecisionUid& u) {
  j.at(0).get_to(u.origin);
  j.at(1).get_to(u.counter);
}

template <class A>
struct PaxosWithPredecessors {
  Paxos<A> consensus;
  GrowSet<DecisionUid> predecessors;

  friend PaxosWithPredecessors merge(const PaxosWithPredecessors& a, const PaxosWithPredecessors& b) {
    return merge_fields<&PaxosWithPredecessors::consensus, &PaxosWithPredecessors::predecessors>(a, b);
  }
  friend bool operator==(const PaxosWithPredecessors&, const PaxosWithPredecessors&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const PaxosWithPredecessors<A>& p) {
  j = nlohmann::json{{"consensus", p.consensus}, {"predecessors", p.predecessors}};
}
template <class A>
void from_json(const nlohmann::json& j, PaxosWithPredecessors<A>& p) {
  j.at("consensus").get_to(p.consensus);
  j.at("predecessors").get_to(p.predecessors);
}

// Partially ordered decisions: an operation may start once all of its
// predecessors are decided; independent operations run concurrently.
template <class A>
struct GenPaxos {
  using Operations = MergeMap<DecisionUid, PaxosWithPredecessors<A>>;
  Operations operations;

  bool is_decided(const DecisionUid& uid, const Membership& m) const {
    const auto* op = operations.find(uid);
    return op != nullptr && op->consensus.is_decided(m);
  }

  DecisionUid fresh_uid(const ReplicaId& origin) const {
    std::uint64_t counter = 0;
    for (const auto& [uid, _] : operations) {
      if (uid.origin == origin) counter = std::max(counter, uid.counter);
    }
    return DecisionUid{origin, counter + 1};
  }

  // Throws std::invalid_argument for a predecessor this replica has never seen.
  GenPaxos next_decision(const GrowSet<DecisionUid>& predecessors, const ReplicaContext& ctx) const {
    for (const auto& p : predecessors) {
      if (!operations.contains(p)) throw std::invalid_argument("unknown predecessor " + p.str());
    }
    bool ready = true;
    for (const auto& p : predecessors) ready = ready && is_decided(p, ctx.membership);
    return update_if<GenPaxos>(ready, [&] {
      return GenPaxos{Operations::singleton(fresh_uid(ctx.replica_id), {Paxos<A>{}, predecessors})};
    });
  }

  // Delta for the consensus of one existing operation; carries the
  // predecessor set so receivers never see a partial dependency list.
  GenPaxos at(const DecisionUid& uid, Paxos<A> delta) const {
    if (is_bottom(delta)) return GenPaxos{};
    const auto* op = operations.find(uid);
    return GenPaxos{Operations::singleton(uid, {std::move(delta), op ? op->predecessors : GrowSet<DecisionUid>{}})};
  }

  std::optional<DecisionUid> first_undecided(const Membership& m) const {
    for (const auto& [uid, op] : operations) {
      if (!op.consensus.is_decided(m)) return uid;
    }
    return std::nullopt;
  }

  // Decided operations that no other operation depends on.
  GrowSet<DecisionUid> frontier(const Membership& m) const {
    GrowSet<DecisionUid> depended;
    for (const auto& [_, op] : operations) depended = merge(depended, op.predecessors);
    GrowSet<DecisionUid> out;
    for (const auto& [uid, op] : operations) {
      if (!depended.contains(uid) && op.consensus.is_decided(m)) out.elements.insert(uid);
    }
    return out;
  }

  // Decision of the greatest operation id (Undecided when empty).
  Agreement<A> decision(const Membership& m) const {
    if (operations.empty()) return Agreement<A>::undecided();
    return operations.entries.rbegin()->second.consensus.decision(m);
  }

  friend GenPaxos merge(const GenPaxos& a, const GenPaxos& b) { return GenPaxos{merge(a.operations, b.operations)}; }
  friend bool operator==(const GenPaxos&, const GenPaxos&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const GenPaxos<A>& p) {
  j = nlohmann::json{{"operations", p.operations}};
}
template <class A>
void from_json(const nlohmann::json& j, GenPaxos<A>& p) {
  j.at("operations").get_to(p.operations);
}

template <class A>
struct Consensus<GenPaxos<A>> : ConsensusDefaults<GenPaxos<A>, A> {
  static constexpr std::string_view name = "gen";

  // Join the first undecided operation; when everything is decided, start a
  // new one depending on the current frontier.
  static GenPaxos<A> propose(const GenPaxos<A>& p, const A& value, const ReplicaContext& ctx) {
    if (auto open = p.first_undecided(ctx.membership)) {
      return p.at(*open, Consensus<Paxos<A>>::propose(p.operations.find(*open)->consensus, value, ctx));
    }
    GenPaxos<A> created = p.next_decision(p.frontier(ctx.membership), ctx);
    GenPaxos<A> next = merge(p, created);
    const auto& [uid, _] = *created.operations.begin();
    return merge(created, next.at(uid, Consensus<Paxos<A>>::propose(Paxos<A>{}, value, ctx)));
  }

  static Agreement<A> decision(const GenPaxos<A>& p, const Membership& m) { return p.decision(m); }

  static GenPaxos<A> upkeep(const GenPaxos<A>& p, const ReplicaContext& ctx) {
    GenPaxos<A> delta;
    for (const auto& [uid, op] : p.operations) delta = merge(delta, p.at(uid, op.consensus.upkeep(ctx)));
    return delta;
  }

  static GenPaxos<A> restart(const GenPaxos<A>& p, const ReplicaContext& ctx) {
    auto open = p.first_undecided(ctx.membership);
    if (!open) return GenPaxos<A>{};
    return p.at(*open, p.operations.find(*open)->consensus.phase1a(ctx));
  }

  static InstanceDecisions decisions(const GenPaxos<A>& p, const Membership& m) {
    InstanceDecisions out;
    for (const auto& [uid, op] : p.operations) out.emplace("op:" + uid.str(), erase_value(op.consensus.decision(m)));
    return out;
  }
};

}  // namespace prdt
