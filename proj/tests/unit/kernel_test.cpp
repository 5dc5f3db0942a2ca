#include <doctest.h>

#include <sstream>

#include "generators.hpp"
#include "prdt/kernel/action.hpp"
#include "prdt/kernel/consensus.hpp"
#include "prdt/protocols/gen_paxos.hpp"
#include "prdt/protocols/multi_paxos.hpp"
#include "prdt/protocols/parallel_voting.hpp"
#include "prdt/protocols/reconfigurable_paxos.hpp"
#include "prdt/protocols/sequence_paxos.hpp"

using namespace prdt;
using Ag = Agreement<std::string>;

static_assert(ConsensusProtocol<Voting<std::string>>);
static_assert(ConsensusProtocol<ParallelVoting<std::string, int>>);
static_assert(ConsensusProtocol<Paxos<std::string>>);
static_assert(ConsensusProtocol<EpochPaxos<std::string>>);
static_assert(ConsensusProtocol<MultiPaxos<std::string>>);
static_assert(ConsensusProtocol<SequencePaxos<std::string>>);
static_assert(ConsensusProtocol<GenPaxos<std::string>>);
static_assert(ConsensusProtocol<ReconfigurablePaxos<std::string>>);

TEST_CASE("agreement join") {
  CHECK(join(Ag::undecided(), Ag::decided("cat")) == Ag::decided("cat"));
  CHECK(join(Ag::decided("cat"), Ag::decided("dog")) == Ag::invalid());
  CHECK(join(Ag::decided("cat"), Ag::decided("cat")) == Ag::decided("cat"));
  CHECK(join(Ag::invalid(), Ag::decided("x")) == Ag::invalid());
  CHECK(join(Ag::undecided(), Ag::invalid()) == Ag::invalid());
}

TEST_CASE("agreement order") {
  CHECK(agreement_leq(Ag::undecided(), Ag::decided("v")));
  CHECK_FALSE(agreement_leq(Ag::decided("a"), Ag::decided("b")));
  CHECK(agreement_leq(Ag::decided("v"), Ag::invalid()));
  CHECK_FALSE(agreement_leq(Ag::invalid(), Ag::decided("v")));
  CHECK_FALSE(agreement_leq(Ag::decided("v"), Ag::undecided()));
}

TEST_CASE("agreement order agrees with join") {
  testgen::Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    auto a = testgen::agreement(rng), b = testgen::agreement(rng);
    CHECK(agreement_leq(a, b) == (join(a, b) == b));
  }
}

TEST_CASE("agreement value access and printing") {
  CHECK_THROWS_AS(Ag::undecided().value(), std::logic_error);
  std::ostringstream os;
  os << Ag::decided("cat") << " " << Ag::invalid();
  CHECK(os.str() == "decided(cat) invalid");
  nlohmann::json j = Ag::decided("cat");
  CHECK(j.dump() == R"({"kind":"decided","value":"cat"})");
  CHECK(j.get<Ag>() == Ag::decided("cat"));
  CHECK_THROWS_AS((nlohmann::json{{"kind", "maybe"}}.get<Ag>()), std::invalid_argument);
}

TEST_CASE("updateIf returns delta or bottom") {
  const ReplicaContext ctx{"a", {"a"}};
  auto yes = [](const GrowSet<std::string>&, const ReplicaContext&) { return true; };
  auto no = [](const GrowSet<std::string>&, const ReplicaContext&) { return false; };
  GrowSet<std::string> v{"v"};
  CHECK(update_if(yes, v, GrowSet<std::string>{}, ctx) == v);
  CHECK(update_if(no, v, GrowSet<std::string>{}, ctx).empty());
  CHECK(update_if(yes, GrowSet<std::string>{}, v, ctx).empty());
}

TEST_CASE("applyAction joins the delta and surfaces it") {
  const ReplicaContext ctx{"a", {"a", "b", "c"}};
  ProtocolAction<Voting<std::string>, std::string> vote{
      [](const Voting<std::string>& s, const ReplicaContext& c) { return s.has_not_voted(c); },
      [](const Voting<std::string>&, const std::string& v, const ReplicaContext& c) { return Voting<std::string>::single(c.replica_id, v); }};
  auto first = apply_action(vote, Voting<std::string>{}, std::string("cat"), ctx);
  CHECK(first.state.vote_of("a") == std::optional<std::string>("cat"));
  CHECK(first.delta == first.state);

  // Disabled: state unchanged, delta bottom.
  auto second = apply_action(vote, first.state, std::string("dog"), ctx);
  CHECK(second.state == first.state);
  CHECK(is_bottom(second.delta));
  CHECK_FALSE(second.changed(first.state));

  CHECK(apply_delta(first.state, first.delta).state == first.state);
}

TEST_CASE("hasNotVoted is frozen once the local vote exists") {
  const ReplicaContext ctx{"b", {"a", "b", "c"}};
  testgen::Rng rng(9);
  auto s = Voting<std::string>::single("b", "x");
  for (int i = 0; i < 500; ++i) {
    auto delta = Voting<std::string>::single(std::string(1, static_cast<char>('a' + testgen::small_int(rng, 3))),
                                             std::to_string(testgen::small_int(rng, 2)));
    CHECK_FALSE(merge(s, delta).has_not_voted(ctx));
  }
}

TEST_CASE("instance decisions default to one key") {
  auto v = Voting<std::string>::single("a", "x");
  auto d = instance_decisions(v, Membership{"a"});
  REQUIRE(d.size() == 1);
  CHECK(d.at("0") == Agreement<nlohmann::json>::decided("x"));
}

TEST_CASE("membership") {
  CHECK(Membership{"a", "b", "c"}.quorum() == 2);
  CHECK(Membership{"a", "b", "c", "d"}.quorum() == 3);
  CHECK(Membership{"a"}.quorum() == 1);
  CHECK_THROWS_AS(Membership{}.require_nonempty(), std::invalid_argument);
  CHECK(nlohmann::json(Membership{"b", "a"}).dump() == R"(["a","b"])");
}
