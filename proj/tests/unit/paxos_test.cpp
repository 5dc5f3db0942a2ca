#include <doctest.h>

#include "example_run.hpp"
#include "prdt/protocols/paxos.hpp"

using namespace prdt;
using P = Paxos<std::string>;
using R = PaxosRound<std::string>;

namespace {
const Membership m3{"id1", "id2", "id3"};
ReplicaContext ctx(const char* id) { return {id, m3}; }
}  // namespace

TEST_CASE("ballots order by counter then uid") {
  CHECK(BallotNum{"id9", 1} < BallotNum{"id1", 2});
  CHECK(BallotNum{"id1", 2} < BallotNum{"id2", 2});
  CHECK(nlohmann::json(BallotNum{"id2", 1}).dump() == R"({"counter":1,"uid":"id2"})");
}

TEST_CASE("phase1a opens the next ballot with a self vote") {
  CHECK(P{}.phase1a(ctx("id2")) == example_run::ballot1({{"id2", "id2"}}, {}));
  auto five = P::with_round(BallotNum{"id3", 5}, R{});
  auto next = five.phase1a(ctx("id1"));
  CHECK(next.current_ballot() == BallotNum{"id1", 6});
}

TEST_CASE("concurrent phase1a from empty keeps both rounds") {
  auto a = P{}.phase1a(ctx("id1"));
  auto b = P{}.phase1a(ctx("id2"));
  auto m = merge(a, b);
  REQUIRE(m.rounds.size() == 2);
  CHECK(m.rounds.contains(BallotNum{"id1", 1}));
  CHECK(m.rounds.contains(BallotNum{"id2", 1}));
  CHECK(m.current_ballot() == BallotNum{"id2", 1});
}

TEST_CASE("phase1b confirms the candidate and relays the accepted vote") {
  auto s = example_run::ballot1({{"id2", "id2"}}, {});
  CHECK(s.phase1b(ctx("id3")) == example_run::ballot1({{"id3", "id2"}}, {}));
  CHECK(is_bottom(P{}.phase1b(ctx("id3"))));

  // id3 accepted val0 in ballot (id1,0) before ballot (id2,1) opened.
  auto old = P::with_round(BallotNum{"id1", 0}, R{{}, example_run::voting<std::string>({{"id3", "val0"}})});
  auto s2 = merge(old, s);
  auto delta = s2.phase1b(ctx("id3"));
  auto expected = merge(example_run::ballot1({{"id3", "id2"}}, {}),
                        P::with_round(BallotNum{"id1", 0}, R{{}, example_run::voting<std::string>({{"id3", "val0"}})}));
  CHECK(delta == expected);
}

TEST_CASE("phase2a proposes the most recent prior value") {
  auto leader = example_run::ballot1({{"id2", "id2"}, {"id3", "id2"}}, {});
  CHECK(leader.phase2a("val1", ctx("id2")) == example_run::ballot1({}, {{"id2", "val1"}}));
  CHECK(is_bottom(leader.phase2a("val1", ctx("id3"))));

  auto prior = P::with_round(BallotNum{"id1", 0}, R{{}, example_run::voting<std::string>({{"id1", "val0"}})});
  auto s = merge(prior, leader);
  CHECK(s.phase2a("val1", ctx("id2")) == example_run::ballot1({}, {{"id2", "val0"}}));
}

TEST_CASE("phase2b accepts the current proposal once") {
  auto s = example_run::ballot1({{"id2", "id2"}, {"id3", "id2"}}, {{"id2", "val1"}});
  CHECK(s.phase2b(ctx("id3")) == example_run::ballot1({}, {{"id3", "val1"}}));
  CHECK(is_bottom(s.phase2b(ctx("id2"))));
  CHECK(is_bottom(example_run::ballot1({{"id2", "id2"}}, {}).phase2b(ctx("id3"))));
}

TEST_CASE("upkeep picks the first enabled phase") {
  CHECK(is_bottom(P{}.upkeep(ctx("id1"))));
  auto leader = example_run::ballot1({{"id2", "id2"}, {"id3", "id2"}}, {});
  CHECK(leader.upkeep(ctx("id2"), std::string("val1")) == example_run::ballot1({}, {{"id2", "val1"}}));
  CHECK(is_bottom(leader.upkeep(ctx("id2"))));
  CHECK(leader.upkeep(ctx("id1")) == example_run::ballot1({{"id1", "id2"}}, {}));
  auto decided = example_run::ballot1({{"id2", "id2"}, {"id3", "id2"}}, {{"id1", "val1"}, {"id2", "val1"}, {"id3", "val1"}});
  for (auto id : {"id1", "id2", "id3"}) CHECK(is_bottom(decided.upkeep(ctx(id))));
}

TEST_CASE("paxos decision") {
  CHECK(example_run::ballot1({}, {{"id2", "val1"}, {"id3", "val1"}}).decision(m3) == Agreement<std::string>::decided("val1"));
  CHECK(example_run::ballot1({}, {{"id2", "val1"}}).decision(m3).is_undecided());
  // Not reachable through the actions: two rounds deciding differently.
  auto other = P::with_round(BallotNum{"id1", 2}, R{{}, example_run::voting<std::string>({{"id1", "val2"}, {"id3", "val2"}})});
  CHECK(merge(example_run::ballot1({}, {{"id2", "val1"}, {"id3", "val1"}}), other).decision(m3).is_invalid());
  CHECK(example_run::ballot1({{"id1", "id1"}, {"id1", "id2"}}, {}).decision(m3).is_invalid());
}

TEST_CASE("propose and restart") {
  auto decided = example_run::ballot1({{"id2", "id2"}, {"id3", "id2"}}, {{"id2", "val1"}, {"id3", "val1"}});
  CHECK(is_bottom(Consensus<P>::propose(decided, "x", ctx("id1"))));
  CHECK(is_bottom(Consensus<P>::restart(decided, ctx("id1"))));
  CHECK(Consensus<P>::restart(P{}, ctx("id1")) == P{}.phase1a(ctx("id1")));
}

TEST_CASE("nine-step example run, state by state") {
  sim::Simulation<P> sim(3);
  const auto steps = example_run::steps();
  const auto expected = example_run::expected_states();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CAPTURE(i + 1);
    sim.apply(steps[i]);
    for (std::size_t slot = 0; slot < 3; ++slot) {
      CAPTURE(slot);
      CHECK(sim.state(slot) == expected[i][slot]);
    }
    CHECK(sim.check().empty());
  }
  for (std::size_t slot = 0; slot < 3; ++slot) CHECK(sim.state(slot).decision(m3) == Agreement<std::string>::decided("val1"));
}

TEST_CASE("paxos json uses fixed field names") {
  auto s = example_run::ballot1({{"id2", "id2"}}, {});
  CHECK(nlohmann::json(s).dump() ==
        R"({"rounds":[[{"counter":1,"uid":"id2"},{"leaderElection":[["id2","id2"]],"proposals":[]}]]})");
  CHECK(nlohmann::json(s).get<P>() == s);
}
