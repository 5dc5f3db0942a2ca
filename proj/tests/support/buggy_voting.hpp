#pragma once

// Voting with the hasNotVoted guard removed, used to confirm the safety
// oracle fires.

#include "prdt/protocols/voting.hpp"

namespace prdt::testing {

struct UnguardedVoting {
  Voting<std::string> inner;

  friend UnguardedVoting merge(const UnguardedVoting& a, const UnguardedVoting& b) {
    return UnguardedVoting{merge(a.inner, b.inner)};
  }
  friend bool operator==(const UnguardedVoting&, const UnguardedVoting&) = default;
};

}  // namespace prdt::testing

template <>
struct prdt::Consensus<prdt::testing::UnguardedVoting>
    : prdt::ConsensusDefaults<prdt::testing::UnguardedVoting, std::string> {
  using U = prdt::testing::UnguardedVoting;
  static constexpr std::string_view name = "voting-unguarded";
  static U propose(const U&, const std::string& value, const ReplicaContext& ctx) {
    return U{Voting<std::string>::single(ctx.replica_id, value)};
  }
  static Agreement<std::string> decision(const U& p, const Membership& m) { return p.inner.decision(m); }
};
