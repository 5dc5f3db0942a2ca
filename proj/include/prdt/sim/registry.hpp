#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prdt/sim/harness.hpp"

namespace prdt::sim {

// Type-erased front end over the protocol catalogue, for the CLI and the
// Python module.
struct SimReport {
  std::string protocol;
  std::size_t runs = 0;
  std::size_t decided_runs = 0;
  std::size_t restarts = 0;
  std::vector<Violation> violations;
  std::optional<RunTrace> failure;
  RunTrace last_trace;

  bool passed() const { return violations.empty(); }
};

std::vector<std::string> protocol_names();
bool is_protocol(const std::string& name);

// Throws std::invalid_argument for an unknown protocol.
SimReport run_protocol(const std::string& name, const SimConfig& cfg);
SimReport replay_protocol(const RunTrace& trace);

}  // namespace prdt::sim
