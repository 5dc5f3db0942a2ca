#pragma once

#include <string>

#include "prdt/lattice/merge_list.hpp"
#include "prdt/protocols/paxos.hpp"

namespace prdt {

// Totally ordered log of single-shot instances; instance n only opens once
// instances 0..n-1 are decided.
template <class A>
struct SequencePaxos {
  MergeList<Paxos<A>> log;

  bool all_decided(const Membership& m) const {
    for (const auto& instance : log) {
      if (!instance.is_decided(m)) return false;
    }
    return true;
  }

  std::optional<std::size_t> first_undecided(const Membership& m) const {
    for (std::size_t i = 0; i < log.size(); ++i) {
      if (!log[i].is_decided(m)) return i;
    }
    return std::nullopt;
  }

  SequencePaxos next_decision(const ReplicaContext& ctx) const {
    return update_if<SequencePaxos>(all_decided(ctx.membership),
                                    [&] { return SequencePaxos{MergeList<Paxos<A>>::at(log.size(), Paxos<A>{})}; });
  }

  static SequencePaxos at(std::size_t index, Paxos<A> delta) {
    if (is_bottom(delta)) return SequencePaxos{};
    return SequencePaxos{MergeList<Paxos<A>>::at(index, std::move(delta))};
  }

  // Decision of the newest instance (Undecided for an empty log).
  Agreement<A> decision(const Membership& m) const {
    if (log.empty()) return Agreement<A>::undecided();
    return log.items.back().decision(m);
  }

  friend SequencePaxos merge(const SequencePaxos& a, const SequencePaxos& b) {
    return SequencePaxos{merge(a.log, b.log)};
  }
  friend bool operator==(const SequencePaxos&, const SequencePaxos&) = default;
};

template <class A>
void to_json(nlohmann::json& j, const SequencePaxos<A>& p) {
  j = nlohmann::json{{"log", p.log}};
}
template <class A>
void from_json(const nlohmann::json& j, SequencePaxos<A>& p) {
  j.at("log").get_to(p.log);
}

template <class A>
struct Consensus<SequencePaxos<A>> : ConsensusDefaults<SequencePaxos<A>, A> {
  static constexpr std::string_view name = "sequence";

  static SequencePaxos<A> propose(const SequencePaxos<A>& p, const A& value, const ReplicaContext& ctx) {
    if (auto open = p.first_undecided(ctx.membership)) {
      return SequencePaxos<A>::at(*open, Consensus<Paxos<A>>::propose(p.log[*open], value, ctx));
    }
    SequencePaxos<A> append = p.next_decision(ctx);
    const std::size_t index = p.log.size();
    return merge(append, SequencePaxos<A>::at(index, Consensus<Paxos<A>>::propose(Paxos<A>{}, value, ctx)));
  }

  static Agreement<A> decision(const SequencePaxos<A>& p, const Membership& m) { return p.decision(m); }

  // Every instance may still need local votes (e.g. a lagging replica).
  static SequencePaxos<A> upkeep(const SequencePaxos<A>& p, const ReplicaContext& ctx) {
    SequencePaxos<A> delta;
    for (std::size_t i = 0; i < p.log.size(); ++i) {
      delta = merge(delta, SequencePaxos<A>::at(i, p.log[i].upkeep(ctx)));
    }
    return delta;
  }

  static SequencePaxos<A> restart(const SequencePaxos<A>& p, const ReplicaContext& ctx) {
    auto open = p.first_undecided(ctx.membership);
    if (!open) return SequencePaxos<A>{};
    return SequencePaxos<A>::at(*open, p.log[*open].phase1a(ctx));
  }

  static InstanceDecisions decisions(const SequencePaxos<A>& p, const Membership& m) {
    InstanceDecisions out;
    for (std::size_t i = 0; i < p.log.size(); ++i) {
      out.emplace("log:" + std::to_string(i), erase_value(p.log[i].decision(m)));
    }
    return out;
  }
};

}  // namespace prdt
