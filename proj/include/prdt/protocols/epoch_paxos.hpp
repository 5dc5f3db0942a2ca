#pragma once

#include <string>

#include "prdt/lattice/epoch.hpp"
#include "prdt/protocols/paxos.hpp"

namespace prdt {

// Wraps an inner delta computed at epoch `counter`. A bottom inner delta stays
// bottom so that idle replicas send nothing.
template <Semilattice V>
Epoch<V> lift_to_epoch(std::uint64_t counter, V inner_delta) {
  if (is_bottom(inner_delta)) return Epoch<V>{};
  return Epoch<V>{counter, std::move(inner_delta)};
}

inline std::string epoch_key(std::uint64_t counter) { return "epoch:" + std::to_string(counter); }

// A series of single-shot decisions where each new epoch discards the last.
template <class A>
struct EpochPaxos {
  Epoch<Paxos<A>> inner;

  std::uint64_t counter() const { return inner.counter; }
  const Paxos<A>& current() const { return inner.value; }

  static EpochPaxos lift(std::uint64_t counter, Paxos<A> delta) {
    return EpochPaxos{lift_to_epoch(counter, std::move(delta))};
  }

  EpochPaxos next_decision(const ReplicaContext& ctx) const {
    return update_if<EpochPaxos>(inner.value.is_decided(ctx.membership),
                                 [&] { return EpochPaxos{Epoch<Paxos<A>>{inner.counter + 1, Paxos<A>{}}}; });
  }

  Agreement<A> decision(const Membership& m) const { return inner.value.decision(m); }

  friend EpochPaxos merge(const EpochPaxos& a, const EpochPaxos& b) { return EpochPaxos{merge(a.inner, b.inner)}; }
  friend bool operator==(const EpochPaxos&, const EpochPaxos&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const EpochPaxos<A>& p) {
  j = nlohmann::json{{"inner", p.inner}};
}
template <class A>
void from_json(const nlohmann::json& j, EpochPaxos<A>& p) {
  j.at("inner").get_to(p.inner);
}

// Shared Consensus plumbing for protocols of the form {Epoch<Paxos<A>> inner}
// with a `next_decision` action.
template <class P, class A>
struct EpochConsensusBase : ConsensusDefaults<P, A> {
  static constexpr bool discards_instances = true;

  // On a decided epoch, open the next one and propose there.
  static P propose(const P& p, const A& value, const ReplicaContext& ctx) {
    if (p.current().is_decided(ctx.membership)) {
      P advance = p.next_decision(ctx);
      P next = merge(p, advance);
      return merge(advance, P::lift(next.counter(), Consensus<Paxos<A>>::propose(next.current(), value, ctx)));
    }
    return P::lift(p.counter(), Consensus<Paxos<A>>::propose(p.current(), value, ctx));
  }
  static Agreement<A> decision(const P& p, const Membership& m) { return p.decision(m); }
  static P upkeep(const P& p, const ReplicaContext& ctx) { return P::lift(p.counter(), p.current().upkeep(ctx)); }
  static P restart(const P& p, const ReplicaContext& ctx) {
    return P::lift(p.counter(), Consensus<Paxos<A>>::restart(p.current(), ctx));
  }
  static InstanceDecisions decisions(const P& p, const Membership& m) {
    return {{epoch_key(p.counter()), erase_value(p.decision(m))}};
  }
};

template <class A>
struct Consensus<EpochPaxos<A>> : EpochConsensusBase<EpochPaxos<A>, A> {
  static constexpr std::string_view name = "epoch";
};

}  // namespace prdt
