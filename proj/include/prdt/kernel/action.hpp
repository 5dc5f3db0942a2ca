#pragma once

#include <functional>
#include <type_traits>
#include <utility>

#include "prdt/kernel/agreement.hpp"
#include "prdt/kernel/replica.hpp"
#include "prdt/lattice/lattice.hpp"

namespace prdt {

// A monotone boolean view of a state: once a threshold state is reached the
// answer never changes under further merges. Monotonicity is the author's
// obligation and is checked by property tests, not by the type system.
template <class S>
using ThresholdQuery = std::function<bool(const S&, const ReplicaContext&)>;

template <class S, class A>
using DecisionFunction = std::function<Agreement<A>(const S&)>;

// Returns `delta` if the query holds on `state`, otherwise the empty update.
template <Semilattice S, class Query>
  requires std::is_invocable_r_v<bool, const Query&, const S&, const ReplicaContext&>
S update_if(const Query& query, S delta, const S& state, const ReplicaContext& ctx) {
  if (!query(state, ctx)) return S{};
  return delta;
}

// Lazy form: `make_delta` only runs when the action is enabled, which matters
// when the delta is not even well-defined otherwise (e.g. no leader yet).
template <Semilattice S, class MakeDelta>
  requires std::is_invocable_r_v<S, MakeDelta&>
S update_if(bool enabled, MakeDelta&& make_delta) {
  if (!enabled) return S{};
  return std::forward<MakeDelta>(make_delta)();
}

template <Semilattice S, class P>
struct ProtocolAction {
  ThresholdQuery<S> enabling;
  std::function<S(const S&, const P&, const ReplicaContext&)> body;

  S operator()(const S& state, const P& param, const ReplicaContext& ctx) const {
    if (!enabling(state, ctx)) return S{};
    return body(state, param, ctx);
  }
};

// Runs the action and joins its delta into the local state immediately.
template <Semilattice S, class P>
Applied<S> apply_action(const ProtocolAction<S, P>& action, const S& state, const P& param,
                        const ReplicaContext& ctx) {
  return apply_delta(state, action(state, param, ctx));
}

}  // namespace prdt
