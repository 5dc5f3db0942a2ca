#pragma once

#include <compare>
#include <map>
#include <optional>
#include <utility>

#include <json.hpp>

#include "prdt/kernel/action.hpp"
#include "prdt/kernel/agreement.hpp"
#include "prdt/kernel/consensus.hpp"
#include "prdt/kernel/replica.hpp"
#include "prdt/lattice/grow_set.hpp"

namespace prdt {

template <class A>
struct Vote {
  ReplicaId voter;
  A value;

  friend bool operator==(const Vote&, const Vote&) = default;
  friend auto operator<=>(const Vote&, const Vote&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const Vote<A>& v) {
  j = nlohmann::json::array({v.voter, v.value});
}

template <class A>
void from_json(const nlohmann::json& j, Vote<A>& v) {
  j.at(0).get_to(v.voter);
  j.at(1).get_to(v.value);
}

// Single-round vote: every process may vote once.
template <class A>
struct Voting {
  GrowSet<Vote<A>> votes;

  static Voting single(ReplicaId voter, A value) {
    return Voting{GrowSet<Vote<A>>{Vote<A>{std::move(voter), std::move(value)}}};
  }

  bool has_not_voted(const ReplicaId& id) const {
    // Votes are ordered by voter first, so this is a range probe.
    auto it = votes.elements.lower_bound(Vote<A>{id, A{}});
    if (it != votes.elements.end() && it->voter == id) return false;
    if (it != votes.elements.begin() && std::prev(it)->voter == id) return false;
    return true;
  }
  bool has_not_voted(const ReplicaContext& ctx) const { return has_not_voted(ctx.replica_id); }

  // The value this replica voted for, if any.
  std::optional<A> vote_of(const ReplicaId& id) const {
    for (const auto& v : votes) {
      if (v.voter == id) return v.value;
    }
    return std::nullopt;
  }

  Voting vote_for(const A& value, const ReplicaContext& ctx) const {
    return update_if<Voting>(has_not_voted(ctx), [&] { return single(ctx.replica_id, value); });
  }

  bool has_duplicate_votes() const {
    const Vote<A>* prev = nullptr;
    for (const auto& v : votes) {
      if (prev != nullptr && prev->voter == v.voter) return true;
      prev = &v;
    }
    return false;
  }

  // Value with the most distinct member votes and that count. Ties go to the
  // least value so every replica computes the same answer.
  std::optional<std::pair<A, std::size_t>> leading_value(const Membership& membership) const {
    std::map<A, std::size_t> counts;
    for (const auto& v : votes) {
      if (membership.contains(v.voter)) ++counts[v.value];
    }
    std::optional<std::pair<A, std::size_t>> best;
    for (const auto& [value, count] : counts) {
      if (!best || count > best->second) best.emplace(value, count);
    }
    return best;
  }

  Agreement<A> decision(const Membership& membership) const {
    membership.require_nonempty();
    if (has_duplicate_votes()) return Agreement<A>::invalid();
    auto leading = leading_value(membership);
    if (leading && leading->second >= membership.quorum()) return Agreement<A>::decided(leading->first);
    return Agreement<A>::undecided();
  }

  friend Voting merge(const Voting& a, const Voting& b) { return Voting{merge(a.votes, b.votes)}; }
  friend bool operator==(const Voting&, const Voting&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const Voting<A>& v) {
  j = v.votes;
}

template <class A>
void from_json(const nlohmann::json& j, Voting<A>& v) {
  j.get_to(v.votes);
}

template <class A>
struct Consensus<Voting<A>> : ConsensusDefaults<Voting<A>, A> {
  static constexpr std::string_view name = "voting";

  static Voting<A> propose(const Voting<A>& p, const A& value, const ReplicaContext& ctx) {
    return p.vote_for(value, ctx);
  }
  static Agreement<A> decision(const Voting<A>& p, const Membership& m) { return p.decision(m); }
};

}  // namespace prdt
