#include "prdt/sim/registry.hpp"

#include <functional>
#include <map>
#include <stdexcept>

#include "prdt/protocols/epoch_paxos.hpp"
#include "prdt/protocols/gen_paxos.hpp"
#include "prdt/protocols/multi_paxos.hpp"
#include "prdt/protocols/parallel_voting.hpp"
#include "prdt/protocols/paxos.hpp"
#include "prdt/protocols/reconfigurable_paxos.hpp"
#include "prdt/protocols/sequence_paxos.hpp"
#include "prdt/protocols/voting.hpp"

namespace prdt::sim {

std::vector<ReplicaId> default_replica_ids(std::size_t n) {
  std::vector<ReplicaId> ids;
  for (std::size_t i = 1; i <= n; ++i) ids.emplace_back("id" + std::to_string(i));
  return ids;
}

namespace {

struct Entry {
  std::function<SimReport(const SimConfig&)> run;
  std::function<SimReport(const RunTrace&)> replay;
};

template <class P>
SimReport report_of(const Verdict<P>& v) {
  SimReport r;
  r.protocol = std::string(Consensus<P>::name);
  r.runs = v.runs;
  r.decided_runs = v.decided_runs;
  r.restarts = v.restarts;
  r.last_trace = v.last_trace;
  if (v.failure) {
    r.violations = v.failure->violations;
    r.failure = v.failure->trace;
  }
  return r;
}

template <class P>
Entry entry() {
  return Entry{
      [](const SimConfig& cfg) { return report_of(run_random_test<P>(cfg)); },
      [](const RunTrace& trace) {
        auto result = replay_trace<P>(trace);
        SimReport r;
        r.protocol = trace.protocol;
        r.runs = 1;
        r.decided_runs = result.all_decided ? 1 : 0;
        r.violations = result.violations;
        if (!result.passed()) r.failure = result.trace;
        r.last_trace = std::move(result.trace);
        return r;
      }};
}

const std::map<std::string, Entry>& registry() {
  using S = std::string;
  static const std::map<std::string, Entry> table{
      {"voting", entry<Voting<S>>()},
      {"parallel-voting", entry<ParallelVoting<S, S>>()},
      {"paxos", entry<Paxos<S>>()},
      {"epoch", entry<EpochPaxos<S>>()},
      {"multipaxos", entry<MultiPaxos<S>>()},
      {"sequence", entry<SequencePaxos<S>>()},
      {"gen", entry<GenPaxos<S>>()},
      {"reconfig", entry<ReconfigurablePaxos<S>>()},
  };
  return table;
}

const Entry& lookup(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown protocol: " + name);
  return it->second;
}

}  // namespace

std::vector<std::string> protocol_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

bool is_protocol(const std::string& name) { return registry().contains(name); }

SimReport run_protocol(const std::string& name, const SimConfig& cfg) { return lookup(name).run(cfg); }

SimReport replay_protocol(const RunTrace& trace) { return lookup(trace.protocol).replay(trace); }

}  // namespace prdt::sim
