#pragma once

#include <concepts>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "prdt/kernel/agreement.hpp"
#include "prdt/kernel/replica.hpp"
#include "prdt/lattice/lattice.hpp"

namespace prdt {

// Protocol-agnostic view of a consensus state type P. Specializations provide
//
//   using Value;
//   static constexpr std::string_view name;
//   static P propose(const P&, const Value&, const ReplicaContext&);   // delta
//   static Agreement<Value> decision(const P&, const Membership&);
//   static P upkeep(const P&, const ReplicaContext&);                  // delta
//   static P restart(const P&, const ReplicaContext&);                 // delta
//
// and optionally `decisions` (per-instance view for multi-shot protocols) and
// `discards_instances` (true when merges may drop finished instances).
template <class P>
struct Consensus;

// Per-instance decisions keyed by instance name ("0", "epoch:3", "log:2", ...).
// Values are type-erased so one protocol may decide several value types.
using InstanceDecisions = std::map<std::string, Agreement<nlohmann::json>>;

template <class V>
Agreement<nlohmann::json> erase_value(const Agreement<V>& a) {
  if (a.is_decided()) return Agreement<nlohmann::json>::decided(nlohmann::json(a.value()));
  return a.is_invalid() ? Agreement<nlohmann::json>::invalid() : Agreement<nlohmann::json>::undecided();
}

template <class P, class V>
struct ConsensusDefaults {
  using Value = V;
  static constexpr bool discards_instances = false;

  static P upkeep(const P&, const ReplicaContext&) { return P{}; }
  static P restart(const P&, const ReplicaContext&) { return P{}; }
};

template <class P>
concept ConsensusProtocol =
    Semilattice<P> &&
    requires(const P& p, const typename Consensus<P>::Value& v, const ReplicaContext& ctx,
             const Membership& m) {
      { Consensus<P>::name } -> std::convertible_to<std::string_view>;
      { Consensus<P>::propose(p, v, ctx) } -> std::same_as<P>;
      { Consensus<P>::decision(p, m) } -> std::same_as<Agreement<typename Consensus<P>::Value>>;
      { Consensus<P>::upkeep(p, ctx) } -> std::same_as<P>;
      { Consensus<P>::restart(p, ctx) } -> std::same_as<P>;
      { Consensus<P>::discards_instances } -> std::convertible_to<bool>;
    };

template <ConsensusProtocol P>
using ValueOf = typename Consensus<P>::Value;

template <ConsensusProtocol P>
InstanceDecisions instance_decisions(const P& p, const Membership& m) {
  if constexpr (requires { Consensus<P>::decisions(p, m); }) {
    return Consensus<P>::decisions(p, m);
  } else {
    return {{"0", erase_value(Consensus<P>::decision(p, m))}};
  }
}

// Full-state form of propose: the local state with the proposal joined in.
template <ConsensusProtocol P>
P propose_state(const P& p, const ValueOf<P>& value, const ReplicaContext& ctx) {
  return merge(p, Consensus<P>::propose(p, value, ctx));
}

template <ConsensusProtocol P>
P upkeep_state(const P& p, const ReplicaContext& ctx) {
  return merge(p, Consensus<P>::upkeep(p, ctx));
}

}  // namespace prdt
