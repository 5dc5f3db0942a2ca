#pragma once

#include "prdt/sim/harness.hpp"

namespace prdt::testdrive {

// All-pairs merge+upkeep until nothing changes; returns the number of passes.
template <class P>
int settle(sim::Simulation<P>& s, int max_passes = 20) {
  for (int pass = 1; pass <= max_passes; ++pass) {
    bool changed = false;
    for (std::size_t from = 0; from < s.size(); ++from) {
      for (std::size_t to = 0; to < s.size(); ++to) {
        if (from != to) changed = s.apply(sim::SimStep::merge(from, to)) || changed;
      }
    }
    if (!changed) return pass;
  }
  return max_passes;
}

// Propose at `slot` and gossip until quiet, at most `attempts` times, until
// every slot sees a decision.
template <class P>
bool propose_until_decided(sim::Simulation<P>& s, std::size_t slot, const std::string& value, int attempts = 6) {
  for (int i = 0; i < attempts; ++i) {
    s.apply(sim::SimStep::propose(slot, value));
    settle(s);
    if (s.all_decided()) return true;
  }
  return false;
}

}  // namespace prdt::testdrive
