#pragma once

#include <utility>

#include "prdt/lattice/product.hpp"
#include "prdt/protocols/voting.hpp"

namespace prdt {

// Two independent votes side by side; merge is derived component-wise.
template <class A, class B>
using ParallelVoting = Product<Voting<A>, Voting<B>>;

// Invalid if either side is invalid, undecided if either side is undecided,
// otherwise the pair of both decisions.
template <class A, class B>
Agreement<std::pair<A, B>> parallel_decision(const Agreement<A>& a, const Agreement<B>& b) {
  using Result = Agreement<std::pair<A, B>>;
  if (a.is_invalid() || b.is_invalid()) return Result::invalid();
  if (a.is_undecided() || b.is_undecided()) return Result::undecided();
  return Result::decided({a.value(), b.value()});
}

template <class A, class B>
Agreement<std::pair<A, B>> parallel_decision(const ParallelVoting<A, B>& state, const Membership& m) {
  return parallel_decision(state.template get<0>().decision(m), state.template get<1>().decision(m));
}

template <class A, class B>
struct Consensus<ParallelVoting<A, B>> : ConsensusDefaults<ParallelVoting<A, B>, std::pair<A, B>> {
  static constexpr std::string_view name = "parallel-voting";

  static ParallelVoting<A, B> propose(const ParallelVoting<A, B>& p, const std::pair<A, B>& value,
                                      const ReplicaContext& ctx) {
    return ParallelVoting<A, B>(p.template get<0>().vote_for(value.first, ctx),
                                p.template get<1>().vote_for(value.second, ctx));
  }
  static Agreement<std::pair<A, B>> decision(const ParallelVoting<A, B>& p, const Membership& m) {
    return parallel_decision(p, m);
  }
};

}  // namespace prdt
