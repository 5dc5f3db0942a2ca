#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prdt/kernel/consensus.hpp"
#include "prdt/sim/trace.hpp"
#include "prdt/sim/values.hpp"

namespace prdt::sim {

struct SimConfig {
  std::size_t replica_count = 3;
  std::size_t steps_per_run = 50;
  std::size_t runs = 1;
  double propose_probability = 0.3;
  std::vector<std::string> value_pool{"val1", "val2", "val3"};
  std::uint64_t seed = 1;
  // Consecutive no-change steps (with nothing decided) before a restart is
  // injected; 0 disables the policy.
  std::size_t stall_threshold = 0;
  bool propose_then_upkeep = false;
  // All-pairs merge rounds appended after the random steps; 0 disables.
  std::size_t epilogue_rounds = 0;
  // Restricts proposals to these slots when nonempty.
  std::vector<std::size_t> proposer_slots;
};

std::vector<ReplicaId> default_replica_ids(std::size_t n);

struct Violation {
  std::string kind;  // "invalid-slot" | "disagreement" | "invalid-merge"
  std::string detail;
};

// (i) a slot is Invalid, (ii) two slots decided differently on the same
// instance, (iii) the join of all slots is Invalid.
template <ConsensusProtocol P>
std::vector<Violation> check_oracles(const std::vector<P>& states, const Membership& membership) {
  std::vector<Violation> out;
  std::vector<InstanceDecisions> per_slot;
  per_slot.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    per_slot.push_back(instance_decisions(states[i], membership));
    if (Consensus<P>::decision(states[i], membership).is_invalid()) {
      out.push_back({"invalid-slot", "slot " + std::to_string(i) + " is invalid"});
    }
    for (const auto& [key, d] : per_slot.back()) {
      if (d.is_invalid()) out.push_back({"invalid-slot", "slot " + std::to_string(i) + " instance " + key});
    }
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t k = i + 1; k < states.size(); ++k) {
      for (const auto& [key, a] : per_slot[i]) {
        if (!a.is_decided()) continue;
        auto it = per_slot[k].find(key);
        if (it == per_slot[k].end() || !it->second.is_decided()) continue;
        if (it->second.value() != a.value()) {
          out.push_back({"disagreement", "slots " + std::to_string(i) + "," + std::to_string(k) + " instance " + key +
                                             ": " + a.value().dump() + " vs " + it->second.value().dump()});
        }
      }
    }
  }
  if (!states.empty()) {
    P all = states.front();
    for (std::size_t i = 1; i < states.size(); ++i) all = merge(all, states[i]);
    bool invalid = Consensus<P>::decision(all, membership).is_invalid();
    for (const auto& [_, d] : instance_decisions(all, membership)) invalid = invalid || d.is_invalid();
    if (invalid) out.push_back({"invalid-merge", "join of all slots is invalid"});
  }
  return out;
}

// The array of replica states from the random test generator.
template <ConsensusProtocol P>
class Simulation {
 public:
  using Value = ValueOf<P>;

  explicit Simulation(std::size_t replicas, bool propose_then_upkeep = false)
      : Simulation(default_replica_ids(replicas), std::nullopt, propose_then_upkeep) {}

  Simulation(std::vector<ReplicaId> ids, std::optional<Membership> membership, bool propose_then_upkeep = false)
      : propose_then_upkeep_(propose_then_upkeep) {
    if (ids.empty()) throw std::invalid_argument("simulation needs at least one replica");
    membership_ = membership ? *membership : Membership{std::set<ReplicaId>(ids.begin(), ids.end())};
    membership_.require_nonempty();
    for (auto& id : ids) contexts_.push_back(ReplicaContext{std::move(id), membership_});
    states_.resize(contexts_.size());
  }

  std::size_t size() const { return states_.size(); }
  const std::vector<P>& states() const { return states_; }
  const P& state(std::size_t slot) const { return states_.at(slot); }
  void set_state(std::size_t slot, P p) { states_.at(slot) = std::move(p); }
  const ReplicaContext& context(std::size_t slot) const { return contexts_.at(slot); }
  const Membership& membership() const { return membership_; }

  // Returns whether any state changed.
  bool apply(const SimStep& step) {
    if (step.slot >= states_.size() || (step.kind == StepKind::merge && (step.from >= states_.size() || step.from == step.slot))) {
      throw std::invalid_argument("step out of range: " + describe(step));
    }
    P& target = states_[step.slot];
    const auto& ctx = contexts_[step.slot];
    const P before = target;
    switch (step.kind) {
      case StepKind::propose:
        target = merge(target, Consensus<P>::propose(target, ValueParser<Value>::parse(step.value), ctx));
        if (propose_then_upkeep_) target = upkeep_state(target, ctx);
        break;
      case StepKind::merge:
        target = upkeep_state(merge(target, states_[step.from]), ctx);
        break;
      case StepKind::restart:
        target = merge(target, Consensus<P>::restart(target, ctx));
        break;
    }
    return !(target == before);
  }

  DecisionRow decisions() const {
    DecisionRow row;
    for (const auto& s : states_) row.push_back(erase_value(Consensus<P>::decision(s, membership_)));
    return row;
  }

  bool any_decided() const {
    for (const auto& s : states_) {
      if (Consensus<P>::decision(s, membership_).is_decided()) return true;
    }
    return false;
  }
  bool all_decided() const {
    for (const auto& s : states_) {
      if (!Consensus<P>::decision(s, membership_).is_decided()) return false;
    }
    return true;
  }

  std::vector<Violation> check() const { return check_oracles(states_, membership_); }

 private:
  std::vector<ReplicaContext> contexts_;
  Membership membership_;
  std::vector<P> states_;
  bool propose_then_upkeep_ = false;
};

template <ConsensusProtocol P>
struct RunResult {
  RunTrace trace;
  std::vector<Violation> violations;  // empty on pass
  std::vector<P> final_states;
  bool all_decided = false;
  std::size_t restarts = 0;

  bool passed() const { return violations.empty(); }
};

template <ConsensusProtocol P>
struct Verdict {
  std::size_t runs = 0;
  std::size_t decided_runs = 0;  // runs ending with every slot decided
  std::size_t restarts = 0;
  std::optional<RunResult<P>> failure;
  RunTrace last_trace;

  bool passed() const { return !failure.has_value(); }
};

namespace detail {

template <ConsensusProtocol P>
bool record(Simulation<P>& sim, RunResult<P>& result, const SimStep& step) {
  const bool changed = sim.apply(step);
  result.trace.steps.push_back(step);
  result.trace.decisions.push_back(sim.decisions());
  result.violations = sim.check();
  return changed;
}

}  // namespace detail

// One random run: every slot starts at bottom; each step either proposes at a
// random slot or merges one random slot into another and runs upkeep there.
// Oracles run after every step and the first violation ends the run.
template <ConsensusProtocol P>
RunResult<P> run_once(const SimConfig& cfg, std::uint64_t run_seed) {
  if (cfg.value_pool.empty()) throw std::invalid_argument("value pool must not be empty");
  Simulation<P> sim(cfg.replica_count, cfg.propose_then_upkeep);
  RunResult<P> result;
  result.trace.protocol = std::string(Consensus<P>::name);
  result.trace.seed = run_seed;
  result.trace.replicas = cfg.replica_count;

  std::mt19937_64 rng(run_seed);
  std::bernoulli_distribution do_propose(cfg.propose_probability);
  std::uniform_int_distribution<std::size_t> pick_slot(0, cfg.replica_count - 1);
  std::uniform_int_distribution<std::size_t> pick_value(0, cfg.value_pool.size() - 1);
  const std::size_t n = cfg.replica_count;

  std::size_t stalled = 0;
  for (std::size_t i = 0; i < cfg.steps_per_run && result.passed(); ++i) {
    SimStep step;
    if (cfg.stall_threshold > 0 && stalled >= cfg.stall_threshold && !sim.any_decided()) {
      step = SimStep::restart(pick_slot(rng));
      ++result.restarts;
      stalled = 0;
    } else if (n == 1 || do_propose(rng)) {
      std::size_t slot = cfg.proposer_slots.empty()
                             ? pick_slot(rng)
                             : cfg.proposer_slots[std::uniform_int_distribution<std::size_t>(0, cfg.proposer_slots.size() - 1)(rng)];
      step = SimStep::propose(slot, cfg.value_pool[pick_value(rng)]);
    } else {
      std::size_t from = pick_slot(rng);
      std::size_t to = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
      if (to >= from) ++to;
      step = SimStep::merge(from, to);
    }
    stalled = detail::record(sim, result, step) ? 0 : stalled + 1;
  }

  // Fair epilogue: all-pairs merges; a silent round with undecided slots gets
  // one proposal at the first undecided slot.
  for (std::size_t round = 0; round < cfg.epilogue_rounds && result.passed() && !sim.all_decided(); ++round) {
    bool changed = false;
    for (std::size_t from = 0; from < n && result.passed(); ++from) {
      for (std::size_t to = 0; to < n && result.passed(); ++to) {
        if (from != to) changed = detail::record(sim, result, SimStep::merge(from, to)) || changed;
      }
    }
    if (!changed && result.passed()) {
      for (std::size_t slot = 0; slot < n; ++slot) {
        if (!Consensus<P>::decision(sim.state(slot), sim.membership()).is_decided()) {
          detail::record(sim, result, SimStep::propose(slot, cfg.value_pool.front()));
          ++result.restarts;
          break;
        }
      }
    }
  }

  result.all_decided = sim.all_decided();
  result.final_states = sim.states();
  return result;
}

// Per-run seeds come from one generator seeded with cfg.seed, so a failing
// run is reproducible from its own seed alone.
template <ConsensusProtocol P>
Verdict<P> run_random_test(const SimConfig& cfg) {
  Verdict<P> verdict;
  std::mt19937_64 seeds(cfg.seed);
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    auto result = run_once<P>(cfg, seeds());
    ++verdict.runs;
    verdict.restarts += result.restarts;
    if (result.all_decided) ++verdict.decided_runs;
    verdict.last_trace = result.trace;
    if (!result.passed()) {
      verdict.failure = std::move(result);
      break;
    }
  }
  return verdict;
}

// Re-executes a trace from all-bottom states. Throws std::invalid_argument on
// a trace that does not fit the protocol.
template <ConsensusProtocol P>
RunResult<P> replay_trace(const RunTrace& trace, bool propose_then_upkeep = false) {
  if (trace.protocol != Consensus<P>::name) {
    throw std::invalid_argument("trace is for protocol '" + trace.protocol + "', not '" + std::string(Consensus<P>::name) + "'");
  }
  if (trace.replicas == 0) throw std::invalid_argument("trace has no replicas");
  Simulation<P> sim(trace.replicas, propose_then_upkeep);
  RunResult<P> result;
  result.trace.protocol = trace.protocol;
  result.trace.seed = trace.seed;
  result.trace.replicas = trace.replicas;
  for (const auto& step : trace.steps) {
    detail::record(sim, result, step);
    if (!result.passed()) break;
  }
  result.all_decided = sim.all_decided();
  result.final_states = sim.states();
  return result;
}

// --- property checks ---------------------------------------------------------

struct PropertyReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::string first_failure;

  bool passed() const { return violations == 0; }
};

// Commutativity, associativity, idempotence and bottom-neutrality on random
// triples with structural equality.
template <Semilattice T>
PropertyReport check_lattice_laws(const std::function<T(std::mt19937_64&)>& gen, std::size_t samples, std::uint64_t seed) {
  PropertyReport report;
  std::mt19937_64 rng(seed);
  auto fail = [&](const char* law) {
    if (report.violations++ == 0) report.first_failure = law;
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const T a = gen(rng), b = gen(rng), c = gen(rng);
    ++report.samples;
    const T ab = merge(a, b);
    if (!(ab == merge(b, a))) fail("commutativity");
    if (!(merge(ab, c) == merge(a, merge(b, c)))) fail("associativity");
    if (!(merge(a, a) == a)) fail("idempotence");
    if (!(merge(a, T{}) == a) || !(merge(T{}, a) == a)) fail("bottom-neutrality");
  }
  return report;
}

// Pool of action-reachable states collected from random runs.
template <ConsensusProtocol P>
std::vector<P> reachable_states(const SimConfig& cfg, std::size_t at_least, std::uint64_t seed) {
  std::vector<P> pool{P{}};
  std::mt19937_64 seeds(seed);
  while (pool.size() < at_least) {
    SimConfig one = cfg;
    std::mt19937_64 rng(seeds());
    one.steps_per_run = std::uniform_int_distribution<std::size_t>(0, cfg.steps_per_run)(rng);
    auto run = run_once<P>(one, rng());
    for (auto& s : run.final_states) pool.push_back(std::move(s));
  }
  return pool;
}

template <ConsensusProtocol P>
std::function<P(std::mt19937_64&)> reachable_generator(const SimConfig& cfg, std::size_t pool_size, std::uint64_t seed) {
  auto pool = std::make_shared<std::vector<P>>(reachable_states<P>(cfg, pool_size, seed));
  return [pool](std::mt19937_64& rng) {
    return (*pool)[std::uniform_int_distribution<std::size_t>(0, pool->size() - 1)(rng)];
  };
}

// Decision monotonicity: for random (state, delta) pairs, each instance
// decision of s is below the same instance's decision of s merged with the
// delta. Deltas come from propose, upkeep, restart or another replica's state.
template <ConsensusProtocol P>
PropertyReport check_monotone(const SimConfig& cfg, std::size_t samples, std::uint64_t seed) {
  PropertyReport report;
  std::mt19937_64 rng(seed);
  const auto ids = default_replica_ids(cfg.replica_count);
  const Membership membership{std::set<ReplicaId>(ids.begin(), ids.end())};
  while (report.samples < samples) {
    SimConfig one = cfg;
    one.steps_per_run = std::uniform_int_distribution<std::size_t>(0, cfg.steps_per_run)(rng);
    auto run = run_once<P>(one, rng());
    const auto& states = run.final_states;
    for (std::size_t k = 0; k < states.size() && report.samples < samples; ++k) {
      const P& s = states[k];
      const ReplicaContext ctx{ids[k], membership};
      P delta;
      switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0: {
          const auto& v = cfg.value_pool[std::uniform_int_distribution<std::size_t>(0, cfg.value_pool.size() - 1)(rng)];
          delta = Consensus<P>::propose(s, ValueParser<ValueOf<P>>::parse(v), ctx);
          break;
        }
        case 1: delta = Consensus<P>::upkeep(s, ctx); break;
        case 2: delta = Consensus<P>::restart(s, ctx); break;
        default: delta = states[std::uniform_int_distribution<std::size_t>(0, states.size() - 1)(rng)]; break;
      }
      ++report.samples;
      const auto before = instance_decisions(s, membership);
      const auto after = instance_decisions(merge(s, delta), membership);
      for (const auto& [key, d] : before) {
        auto it = after.find(key);
        if (it == after.end()) {
          if (Consensus<P>::discards_instances) continue;
          if (report.violations++ == 0) report.first_failure = "instance " + key + " disappeared";
          continue;
        }
        if (!agreement_leq(d, it->second)) {
          if (report.violations++ == 0) {
            report.first_failure = "instance " + key + ": " + nlohmann::json(d).dump() + " -> " + nlohmann::json(it->second).dump();
          }
        }
      }
    }
  }
  return report;
}

}  // namespace prdt::sim
