#pragma once

#include "prdt/protocols/epoch_paxos.hpp"

namespace prdt {

// EpochPaxos that carries the decided leader election into the next epoch, so
// the stable leader starts directly in phase 2.
template <class A>
struct MultiPaxos {
  Epoch<Paxos<A>> inner;

  std::uint64_t counter() const { return inner.counter; }
  const Paxos<A>& current() const { return inner.value; }

  static MultiPaxos lift(std::uint64_t counter, Paxos<A> delta) {
    return MultiPaxos{lift_to_epoch(counter, std::move(delta))};
  }

  // The highest round whose proposals decided, i.e. the round that produced
  // the decision of this epoch.
  std::optional<std::pair<BallotNum, PaxosRound<A>>> deciding_round(const Membership& m) const {
    const auto& rounds = inner.value.rounds.entries;
    for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
      if (it->second.proposals.decision(m).is_decided()) return *it;
    }
    return std::nullopt;
  }

  // Leader of the deciding round.
  std::optional<ReplicaId> stable_leader(const Membership& m) const {
    auto round = deciding_round(m);
    if (!round) return std::nullopt;
    auto elected = round->second.leader_election.decision(m);
    return elected.is_decided() ? elected.value() : round->first.uid;
  }

  // The new round is keyed by the leader's uid, so every replica that
  // advances from the same knowledge produces the identical delta.
  MultiPaxos next_decision(const ReplicaContext& ctx) const {
    return update_if<MultiPaxos>(inner.value.is_decided(ctx.membership), [&] {
      auto [ballot, round] = *deciding_round(ctx.membership);
      const ReplicaId leader = stable_leader(ctx.membership).value_or(ballot.uid);
      PaxosRound<A> copied{round.leader_election, Voting<A>{}};
      auto next = Paxos<A>::with_round(inner.value.next_ballot(leader), std::move(copied));
      return MultiPaxos{Epoch<Paxos<A>>{inner.counter + 1, std::move(next)}};
    });
  }

  // Upkeep that may also propose the replica's locally pending value.
  MultiPaxos upkeep(const ReplicaContext& ctx, const std::optional<A>& pending) const {
    return lift(inner.counter, inner.value.upkeep(ctx, pending));
  }

  Agreement<A> decision(const Membership& m) const { return inner.value.decision(m); }

  friend MultiPaxos merge(const MultiPaxos& a, const MultiPaxos& b) { return MultiPaxos{merge(a.inner, b.inner)}; }
  friend bool operator==(const MultiPaxos&, const MultiPaxos&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const MultiPaxos<A>& p) {
  j = nlohmann::json{{"inner", p.inner}};
}
template <class A>
void from_json(const nlohmann::json& j, MultiPaxos<A>& p) {
  j.at("inner").get_to(p.inner);
}

template <class A>
struct Consensus<MultiPaxos<A>> : EpochConsensusBase<MultiPaxos<A>, A> {
  static constexpr std::string_view name = "multipaxos";
};

}  // namespace prdt
