#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "prdt/kernel/action.hpp"
#include "prdt/kernel/consensus.hpp"
#include "prdt/lattice/merge_map.hpp"
#include "prdt/protocols/voting.hpp"

namespace prdt {

// Identifies one Paxos round. Ordered by counter, then by uid.
struct BallotNum {
  ReplicaId uid;
  std::uint64_t counter = 0;

  friend bool operator==(const BallotNum&, const BallotNum&) = default;
  friend std::strong_ordering operator<=>(const BallotNum& a, const BallotNum& b) {
    if (auto c = a.counter <=> b.counter; c != 0) return c;
    return a.uid <=> b.uid;
  }
};

inline void to_json(nlohmann::json& j, const BallotNum& b) {
  j = nlohmann::json{{"uid", b.uid}, {"counter", b.counter}};
}
inline void from_json(const nlohmann::json& j, BallotNum& b) {
  j.at("uid").get_to(b.uid);
  j.at("counter").get_to(b.counter);
}

using LeaderElection = Voting<ReplicaId>;

template <class A>
struct PaxosRound {
  LeaderElection leader_election;
  Voting<A> proposals;

  friend PaxosRound merge(const PaxosRound& a, const PaxosRound& b) {
    return merge_fields<&PaxosRound::leader_election, &PaxosRound::proposals>(a, b);
  }
  friend bool operator==(const PaxosRound&, const PaxosRound&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const PaxosRound<A>& r) {
  j = nlohmann::json{{"leaderElection", r.leader_election}, {"proposals", r.proposals}};
}
template <class A>
void from_json(const nlohmann::json& j, PaxosRound<A>& r) {
  j.at("leaderElection").get_to(r.leader_election);
  j.at("proposals").get_to(r.proposals);
}

// Single-shot Paxos: a grow-only map from ballot to round. Every phase is a
// query-gated action returning a delta.
template <class A>
struct Paxos {
  using Rounds = MergeMap<BallotNum, PaxosRound<A>>;
  Rounds rounds;

  static Paxos with_round(BallotNum ballot, PaxosRound<A> round) {
    return Paxos{Rounds::singleton(std::move(ballot), std::move(round))};
  }

  // --- queries -------------------------------------------------------------

  // The round with the greatest ballot; lower rounds are abandoned.
  std::optional<BallotNum> current_ballot() const {
    if (rounds.empty()) return std::nullopt;
    return rounds.entries.rbegin()->first;
  }
  const PaxosRound<A>* current_round() const {
    if (rounds.empty()) return nullptr;
    return &rounds.entries.rbegin()->second;
  }

  std::uint64_t max_counter() const {
    std::uint64_t m = 0;
    for (const auto& [ballot, _] : rounds) m = std::max(m, ballot.counter);
    return m;
  }

  BallotNum next_ballot(const ReplicaId& uid) const { return BallotNum{uid, max_counter() + 1}; }

  bool current_round_has_candidate() const {
    const auto* round = current_round();
    return round != nullptr && !round->leader_election.votes.empty();
  }

  bool is_current_leader(const ReplicaContext& ctx) const {
    const auto* round = current_round();
    if (round == nullptr) return false;
    auto leader = round->leader_election.decision(ctx.membership);
    return leader.is_decided() && leader.value() == ctx.replica_id;
  }

  // The value proposed in the current round: the leader's own vote when it is
  // known, otherwise the least voted value (all votes agree in a sound run).
  std::optional<A> current_proposal() const {
    const auto* round = current_round();
    if (round == nullptr || round->proposals.votes.empty()) return std::nullopt;
    if (auto own = round->proposals.vote_of(current_ballot()->uid)) return own;
    return round->proposals.votes.begin()->value;
  }

  bool current_round_has_proposal() const { return current_proposal().has_value(); }

  // Proposal from the highest ballot below the current one that has any
  // proposal vote.
  std::optional<A> latest_prior_proposal() const {
    auto current = current_ballot();
    if (!current) return std::nullopt;
    auto it = rounds.entries.find(*current);
    while (it != rounds.entries.begin()) {
      --it;
      const auto& votes = it->second.proposals.votes;
      if (votes.empty()) continue;
      if (auto own = it->second.proposals.vote_of(it->first.uid)) return own;
      return votes.begin()->value;
    }
    return std::nullopt;
  }

  // Ballot and value of the most recent proposal vote cast by `id`.
  std::optional<std::pair<BallotNum, A>> last_accepted(const ReplicaId& id) const {
    for (auto it = rounds.entries.rbegin(); it != rounds.entries.rend(); ++it) {
      if (auto v = it->second.proposals.vote_of(id)) return std::pair{it->first, *v};
    }
    return std::nullopt;
  }

  // --- actions ---------------------------------------------------------------

  // Always enabled: open a new round and vote for ourselves.
  Paxos phase1a(const ReplicaContext& ctx) const {
    PaxosRound<A> round{LeaderElection::single(ctx.replica_id, ctx.replica_id), {}};
    return with_round(next_ballot(ctx.replica_id), std::move(round));
  }

  // Phase 1 of a round is over once it carries a proposal; a late promise
  // would add nothing (the leader has already picked its value).
  bool phase1b_enabled(const ReplicaContext& ctx) const {
    return current_round_has_candidate() && current_round()->leader_election.has_not_voted(ctx) &&
           current_round()->proposals.votes.empty();
  }

  // Confirm the current round's candidate and report our last accepted vote.
  Paxos phase1b(const ReplicaContext& ctx) const {
    return update_if<Paxos>(phase1b_enabled(ctx), [&] {
      const auto ballot = *current_ballot();
      Paxos delta = with_round(ballot, PaxosRound<A>{LeaderElection::single(ctx.replica_id, ballot.uid), {}});
      if (auto accepted = last_accepted(ctx.replica_id)) {
        delta = merge(delta, with_round(accepted->first,
                                        PaxosRound<A>{{}, Voting<A>::single(ctx.replica_id, accepted->second)}));
      }
      return delta;
    });
  }

  bool phase2a_enabled(const ReplicaContext& ctx) const {
    return is_current_leader(ctx) && current_round()->proposals.has_not_voted(ctx);
  }

  // The confirmed leader proposes the most recent prior value, or its own.
  Paxos phase2a(const A& my_value, const ReplicaContext& ctx) const {
    return update_if<Paxos>(phase2a_enabled(ctx), [&] {
      A value = latest_prior_proposal().value_or(my_value);
      return with_round(*current_ballot(), PaxosRound<A>{{}, Voting<A>::single(ctx.replica_id, std::move(value))});
    });
  }

  bool phase2b_enabled(const ReplicaContext& ctx) const {
    return current_round_has_proposal() && current_round()->proposals.has_not_voted(ctx);
  }

  Paxos phase2b(const ReplicaContext& ctx) const {
    return update_if<Paxos>(phase2b_enabled(ctx), [&] {
      return with_round(*current_ballot(), PaxosRound<A>{{}, Voting<A>::single(ctx.replica_id, *current_proposal())});
    });
  }

  // Drive the current round: the first enabled of phase 2b, 2a, 1b. Phase 2a
  // only fires when there is a value to propose: a prior round's proposal or
  // `pending`. Never opens a new round.
  Paxos upkeep(const ReplicaContext& ctx, const std::optional<A>& pending = std::nullopt) const {
    if (phase2b_enabled(ctx)) return phase2b(ctx);
    if (phase2a_enabled(ctx)) {
      if (auto prior = latest_prior_proposal()) return phase2a(*prior, ctx);
      if (pending) return phase2a(*pending, ctx);
    }
    if (phase1b_enabled(ctx)) return phase1b(ctx);
    return Paxos{};
  }

  // Decided if any round's proposals reached a quorum. Any invalid vote set,
  // or two rounds deciding different values, is Invalid.
  Agreement<A> decision(const Membership& membership) const {
    Agreement<A> result;
    for (const auto& [_, round] : rounds) {
      if (round.leader_election.has_duplicate_votes()) return Agreement<A>::invalid();
      result = join(result, round.proposals.decision(membership));
      if (result.is_invalid()) return result;
    }
    return result;
  }

  bool is_decided(const Membership& membership) const { return decision(membership).is_decided(); }

  friend Paxos merge(const Paxos& a, const Paxos& b) { return Paxos{merge(a.rounds, b.rounds)}; }
  friend bool operator==(const Paxos&, const Paxos&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const Paxos<A>& p) {
  j = nlohmann::json{{"rounds", p.rounds}};
}
template <class A>
void from_json(const nlohmann::json& j, Paxos<A>& p) {
  j.at("rounds").get_to(p.rounds);
}

template <class A>
struct Consensus<Paxos<A>> : ConsensusDefaults<Paxos<A>, A> {
  static constexpr std::string_view name = "paxos";

  // Decided: nothing to do. Leader: propose. Otherwise try to become leader.
  static Paxos<A> propose(const Paxos<A>& p, const A& value, const ReplicaContext& ctx) {
    if (p.is_decided(ctx.membership)) return Paxos<A>{};
    if (p.is_current_leader(ctx)) return p.phase2a(value, ctx);
    return p.phase1a(ctx);
  }
  static Agreement<A> decision(const Paxos<A>& p, const Membership& m) { return p.decision(m); }
  static Paxos<A> upkeep(const Paxos<A>& p, const ReplicaContext& ctx) { return p.upkeep(ctx); }
  static Paxos<A> restart(const Paxos<A>& p, const ReplicaContext& ctx) {
    if (p.is_decided(ctx.membership)) return Paxos<A>{};
    return p.phase1a(ctx);
  }
};

}  // namespace prdt
