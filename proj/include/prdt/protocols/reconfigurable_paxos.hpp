#pragma once

#include <string>

#include "prdt/lattice/epoch.hpp"
#include "prdt/lattice/grow_set.hpp"
#include "prdt/protocols/epoch_paxos.hpp"
#include "prdt/protocols/paxos.hpp"

namespace prdt {

// One epoch decides both a value and the membership of the following epoch.
// Every replica that enters an epoch does so from the same decided
// `next_members`, so the union merge on `current_members` is a formality.
template <class A>
struct ConfigurationRound {
  GrowSet<ReplicaId> current_members;
  Paxos<Membership> next_members;
  Paxos<A> inner_consensus;

  friend ConfigurationRound merge(const ConfigurationRound& a, const ConfigurationRound& b) {
    return merge_fields<&ConfigurationRound::current_members, &ConfigurationRound::next_members,
                        &ConfigurationRound::inner_consensus>(a, b);
  }
  friend bool operator==(const ConfigurationRound&, const ConfigurationRound&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const ConfigurationRound<A>& r) {
  j = nlohmann::json{{"currentMembers", r.current_members},
                     {"nextMembers", r.next_members},
                     {"innerConsensus", r.inner_consensus}};
}
template <class A>
void from_json(const nlohmann::json& j, ConfigurationRound<A>& r) {
  j.at("currentMembers").get_to(r.current_members);
  j.at("nextMembers").get_to(r.next_members);
  j.at("innerConsensus").get_to(r.inner_consensus);
}

template <class A>
struct ReconfigurablePaxos {
  Epoch<ConfigurationRound<A>> inner;

  std::uint64_t counter() const { return inner.counter; }
  const ConfigurationRound<A>& round() const { return inner.value; }

  // Epoch 0 carries no member set; it runs on the configured membership.
  Membership members(const Membership& initial) const {
    if (inner.value.current_members.empty()) return initial;
    return Membership{inner.value.current_members.elements};
  }

  ReplicaContext effective(const ReplicaContext& ctx) const {
    return ReplicaContext{ctx.replica_id, members(ctx.membership)};
  }

  bool is_member(const ReplicaContext& ctx) const { return members(ctx.membership).contains(ctx.replica_id); }

  bool both_decided(const Membership& initial) const {
    const auto m = members(initial);
    return inner.value.next_members.is_decided(m) && inner.value.inner_consensus.is_decided(m);
  }

  ReconfigurablePaxos lift(ConfigurationRound<A> delta) const {
    if (is_bottom(delta)) return ReconfigurablePaxos{};
    return ReconfigurablePaxos{Epoch<ConfigurationRound<A>>{inner.counter, std::move(delta)}};
  }
  ReconfigurablePaxos lift_value(Paxos<A> delta) const { return lift({{}, {}, std::move(delta)}); }
  ReconfigurablePaxos lift_members(Paxos<Membership> delta) const { return lift({{}, std::move(delta), {}}); }

  ReconfigurablePaxos next_decision(const ReplicaContext& ctx) const {
    return update_if<ReconfigurablePaxos>(both_decided(ctx.membership), [&] {
      const Membership next = inner.value.next_members.decision(members(ctx.membership)).value();
      ConfigurationRound<A> fresh{GrowSet<ReplicaId>{}, {}, {}};
      fresh.current_members.elements = next.members;
      return ReconfigurablePaxos{Epoch<ConfigurationRound<A>>{inner.counter + 1, std::move(fresh)}};
    });
  }

  // Proposes `next` as the membership of the following epoch.
  ReconfigurablePaxos propose_membership(const Membership& next, const ReplicaContext& ctx) const {
    next.require_nonempty();
    if (!is_member(ctx)) return ReconfigurablePaxos{};
    return lift_members(Consensus<Paxos<Membership>>::propose(inner.value.next_members, next, effective(ctx)));
  }

  Agreement<A> decision(const Membership& initial) const {
    return inner.value.inner_consensus.decision(members(initial));
  }
  Agreement<Membership> membership_decision(const Membership& initial) const {
    return inner.value.next_members.decision(members(initial));
  }

  friend ReconfigurablePaxos merge(const ReconfigurablePaxos& a, const ReconfigurablePaxos& b) {
    return ReconfigurablePaxos{merge(a.inner, b.inner)};
  }
  friend bool operator==(const ReconfigurablePaxos&, const ReconfigurablePaxos&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const ReconfigurablePaxos<A>& p) {
  j = nlohmann::json{{"inner", p.inner}};
}
template <class A>
void from_json(const nlohmann::json& j, ReconfigurablePaxos<A>& p) {
  j.at("inner").get_to(p.inner);
}

// Replicas outside the current epoch's membership stay silent.
template <class A>
struct Consensus<ReconfigurablePaxos<A>> : ConsensusDefaults<ReconfigurablePaxos<A>, A> {
  static constexpr std::string_view name = "reconfig";
  static constexpr bool discards_instances = true;
  using P = ReconfigurablePaxos<A>;

  // Proposes `value` for this epoch and re-proposes the current membership
  // for the next one. A fully decided epoch is advanced first.
  static P propose(const P& p, const A& value, const ReplicaContext& ctx) {
    if (p.both_decided(ctx.membership)) {
      P advance = p.next_decision(ctx);
      P next = merge(p, advance);
      return merge(advance, propose_in(next, value, ctx));
    }
    return propose_in(p, value, ctx);
  }

  static Agreement<A> decision(const P& p, const Membership& m) { return p.decision(m); }

  static P upkeep(const P& p, const ReplicaContext& ctx) {
    if (!p.is_member(ctx)) return P{};
    const auto eff = p.effective(ctx);
    return merge(p.lift_members(p.round().next_members.upkeep(eff)), p.lift_value(p.round().inner_consensus.upkeep(eff)));
  }

  static P restart(const P& p, const ReplicaContext& ctx) {
    if (!p.is_member(ctx)) return P{};
    const auto eff = p.effective(ctx);
    return merge(p.lift_members(Consensus<Paxos<Membership>>::restart(p.round().next_members, eff)),
                 p.lift_value(Consensus<Paxos<A>>::restart(p.round().inner_consensus, eff)));
  }

  static InstanceDecisions decisions(const P& p, const Membership& m) {
    const std::string key = epoch_key(p.counter());
    return {{key + "/value", erase_value(p.decision(m))}, {key + "/members", erase_value(p.membership_decision(m))}};
  }

 private:
  static P propose_in(const P& p, const A& value, const ReplicaContext& ctx) {
    if (!p.is_member(ctx)) return P{};
    const auto eff = p.effective(ctx);
    return merge(p.lift_value(Consensus<Paxos<A>>::propose(p.round().inner_consensus, value, eff)),
                 p.lift_members(Consensus<Paxos<Membership>>::propose(p.round().next_members, eff.membership, eff)));
  }
};

}  // namespace prdt
