#include <doctest.h>

#include "drive.hpp"
#include "prdt/protocols/epoch_paxos.hpp"
#include "prdt/protocols/gen_paxos.hpp"
#include "prdt/protocols/multi_paxos.hpp"
#include "prdt/protocols/reconfigurable_paxos.hpp"
#include "prdt/protocols/sequence_paxos.hpp"

using namespace prdt;
using S = std::string;

namespace {
const Membership m3{"id1", "id2", "id3"};
ReplicaContext ctx(const char* id, const Membership& m = m3) { return {id, m}; }

// A Paxos instance decided on `value` by id1 and id2 under ballot (id1,1).
Paxos<S> decided(const S& value) {
  PaxosRound<S> r{merge(LeaderElection::single("id1", "id1"), LeaderElection::single("id2", "id1")),
                  merge(Voting<S>::single("id1", value), Voting<S>::single("id2", value))};
  return Paxos<S>::with_round(BallotNum{"id1", 1}, r);
}
}  // namespace

TEST_CASE("epoch paxos next decision") {
  EpochPaxos<S> done{Epoch<Paxos<S>>{0, decided("v")}};
  CHECK(done.next_decision(ctx("id1")) == EpochPaxos<S>{Epoch<Paxos<S>>{1, Paxos<S>{}}});
  CHECK(is_bottom(EpochPaxos<S>{}.next_decision(ctx("id1"))));
  CHECK(merge(EpochPaxos<S>{Epoch<Paxos<S>>{1, {}}}, done) == EpochPaxos<S>{Epoch<Paxos<S>>{1, {}}});
}

TEST_CASE("epoch propose on a decided epoch opens the next one") {
  EpochPaxos<S> done{Epoch<Paxos<S>>{0, decided("v")}};
  auto delta = Consensus<EpochPaxos<S>>::propose(done, "w", ctx("id3"));
  CHECK(delta.counter() == 1);
  CHECK(delta.current().current_ballot() == BallotNum{"id3", 1});
}

TEST_CASE("multipaxos keeps the leader election") {
  MultiPaxos<S> done{Epoch<Paxos<S>>{0, decided("v")}};
  CHECK(done.stable_leader(m3) == ReplicaId{"id1"});
  auto next = merge(done, done.next_decision(ctx("id3")));
  CHECK(next.counter() == 1);
  REQUIRE(next.current().rounds.size() == 1);
  CHECK(next.current().current_ballot() == BallotNum{"id1", 2});
  CHECK(next.current().current_round()->proposals.votes.empty());
  CHECK(next.current().is_current_leader(ctx("id1")));
  CHECK(next.current().phase2a_enabled(ctx("id1")));
  CHECK(is_bottom(MultiPaxos<S>{}.next_decision(ctx("id1"))));
  // Same delta no matter who advances.
  CHECK(done.next_decision(ctx("id1")) == done.next_decision(ctx("id2")));
}

TEST_CASE("multipaxos leader is stable across consecutive decisions") {
  using MP = MultiPaxos<S>;
  sim::Simulation<MP> s(3);
  std::vector<ReplicaId> leaders;
  for (int epoch = 0; epoch < 3; ++epoch) {
    REQUIRE(testdrive::propose_until_decided(s, 1, "op" + std::to_string(epoch)));
    CHECK(s.state(0).counter() == static_cast<std::uint64_t>(epoch));
    leaders.push_back(*s.state(0).stable_leader(m3));
    CHECK(s.check().empty());
  }
  CHECK(leaders == std::vector<ReplicaId>{"id2", "id2", "id2"});
}

TEST_CASE("sequence paxos append discipline") {
  using SP = SequencePaxos<S>;
  SP two{MergeList<Paxos<S>>{decided("a"), decided("b")}};
  CHECK(merge(two, two.next_decision(ctx("id1"))).log.size() == 3);
  SP open{MergeList<Paxos<S>>{decided("a"), Paxos<S>{}}};
  CHECK(is_bottom(open.next_decision(ctx("id1"))));
  // Two replicas appending concurrently land in the same instance.
  auto x = Consensus<SP>::propose(two, "x", ctx("id1"));
  auto y = Consensus<SP>::propose(two, "y", ctx("id2"));
  auto both = merge(merge(two, x), y);
  CHECK(both.log.size() == 3);
  CHECK(both.log[2].rounds.size() == 2);
}

TEST_CASE("sequence paxos decisions per index") {
  using SP = SequencePaxos<S>;
  sim::Simulation<SP> s(3);
  for (int i = 0; i < 3; ++i) REQUIRE(testdrive::propose_until_decided(s, 0, "v" + std::to_string(i)));
  auto d = Consensus<SP>::decisions(s.state(2), m3);
  CHECK(d.size() == 3);
  CHECK(d.at("log:0") == Agreement<nlohmann::json>::decided("v0"));
  CHECK(d.at("log:2") == Agreement<nlohmann::json>::decided("v2"));
}

TEST_CASE("gen paxos predecessors") {
  using G = GenPaxos<S>;
  G g;
  auto first = g.next_decision({}, ctx("id1"));
  REQUIRE(first.operations.size() == 1);
  const auto uid = first.operations.begin()->first;
  CHECK(uid == DecisionUid{"id1", 1});
  g = merge(g, first);
  CHECK(is_bottom(g.next_decision(GrowSet<DecisionUid>{uid}, ctx("id2"))));
  CHECK_THROWS_AS(g.next_decision(GrowSet<DecisionUid>{DecisionUid{"id9", 4}}, ctx("id2")), std::invalid_argument);
  CHECK(g.fresh_uid("id1") == DecisionUid{"id1", 2});
}

TEST_CASE("gen paxos independent decisions both decide") {
  using G = GenPaxos<S>;
  sim::Simulation<G> s(3);
  // Two creators start operations with no predecessors at the same time.
  auto a = s.state(0).next_decision({}, s.context(0));
  auto b = s.state(2).next_decision({}, s.context(2));
  s.set_state(0, merge(s.state(0), a));
  s.set_state(2, merge(s.state(2), b));
  for (int round = 0; round < 8; ++round) {
    s.apply(sim::SimStep::propose(0, "left"));
    s.apply(sim::SimStep::propose(2, "right"));
    testdrive::settle(s);
  }
  const auto d = Consensus<G>::decisions(s.state(1), m3);
  CHECK(d.at("op:id1/1").is_decided());
  CHECK(d.at("op:id3/1").is_decided());
  CHECK(s.check().empty());
}

TEST_CASE("reconfigurable next decision needs both instances") {
  using RP = ReconfigurablePaxos<S>;
  const Membership four{"id1", "id2", "id3", "id4"};
  Paxos<Membership> members_decided = Paxos<Membership>::with_round(
      BallotNum{"id1", 1}, PaxosRound<Membership>{merge(LeaderElection::single("id1", "id1"), LeaderElection::single("id2", "id1")),
                                                  merge(Voting<Membership>::single("id1", four), Voting<Membership>::single("id2", four))});
  RP only_value{Epoch<ConfigurationRound<S>>{0, {{}, {}, decided("v")}}};
  CHECK(is_bottom(only_value.next_decision(ctx("id1"))));
  RP both{Epoch<ConfigurationRound<S>>{0, {{}, members_decided, decided("v")}}};
  auto next = merge(both, both.next_decision(ctx("id1")));
  CHECK(next.counter() == 1);
  CHECK(next.members(m3) == four);
  CHECK(next.members(m3).quorum() == 3);
  CHECK(next.round().inner_consensus == Paxos<S>{});
}

TEST_CASE("reconfigurable quorum change applies from the next epoch") {
  using RP = ReconfigurablePaxos<S>;
  const Membership initial{"id1", "id2", "id3"};
  const Membership grown{"id1", "id2", "id3", "id4", "id5"};
  sim::Simulation<RP> s({"id1", "id2", "id3", "id4", "id5"}, initial);

  // Epoch 0: id1 proposes a value and the grown membership.
  const auto& c1 = s.context(0);
  for (int i = 0; i < 6 && !s.state(0).both_decided(initial); ++i) {
    auto st = s.state(0);
    st = merge(st, st.propose_membership(grown, c1));
    st = merge(st, Consensus<RP>::propose(st, "v0", c1));
    s.set_state(0, st);
    testdrive::settle(s);
  }
  REQUIRE(s.state(0).both_decided(initial));
  CHECK(s.state(0).membership_decision(initial) == Agreement<Membership>::decided(grown));
  // Two of three old members sufficed in epoch 0.
  CHECK(s.state(0).members(initial).quorum() == 2);
  // id4 and id5 stay silent in epoch 0.
  CHECK(is_bottom(Consensus<RP>::upkeep(s.state(3), s.context(3))));

  // Advance: the decided membership is in force.
  auto next = merge(s.state(0), s.state(0).next_decision(c1));
  CHECK(next.counter() == 1);
  CHECK(next.members(initial) == grown);
  // Two votes no longer decide; three do.
  auto round = PaxosRound<S>{{}, merge(Voting<S>::single("id1", "x"), Voting<S>::single("id2", "x"))};
  auto two = merge(next, next.lift_value(Paxos<S>::with_round(BallotNum{"id1", 1}, round)));
  CHECK(two.decision(initial).is_undecided());
  auto three = merge(two, next.lift_value(Paxos<S>::with_round(BallotNum{"id1", 1}, PaxosRound<S>{{}, Voting<S>::single("id4", "x")})));
  CHECK(three.decision(initial) == Agreement<S>::decided("x"));
  // id4 may act now.
  CHECK_FALSE(is_bottom(Consensus<RP>::restart(next, s.context(3))));
}

TEST_CASE("composed variant json round trips") {
  MultiPaxos<S> mp{Epoch<Paxos<S>>{2, decided("v")}};
  CHECK(nlohmann::json(mp).get<MultiPaxos<S>>() == mp);
  SequencePaxos<S> sp{MergeList<Paxos<S>>{decided("a"), Paxos<S>{}}};
  CHECK(nlohmann::json(sp).get<SequencePaxos<S>>() == sp);
  GenPaxos<S> g = GenPaxos<S>{}.next_decision({}, ctx("id1"));
  CHECK(nlohmann::json(g).get<GenPaxos<S>>() == g);
  ReconfigurablePaxos<S> rp{Epoch<ConfigurationRound<S>>{1, {GrowSet<ReplicaId>{"id1"}, {}, decided("v")}}};
  CHECK(nlohmann::json(rp).get<ReconfigurablePaxos<S>>() == rp);
}
