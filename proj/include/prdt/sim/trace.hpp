#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "prdt/kernel/agreement.hpp"

namespace prdt::sim {

enum class StepKind { propose, merge, restart };

// Propose(slot, value) | MergeAndUpkeep(from, to) | Restart(slot). Restart is
// only ever injected by the stall policy.
struct SimStep {
  StepKind kind = StepKind::merge;
  std::size_t slot = 0;  // propose/restart target, merge destination
  std::size_t from = 0;  // merge source
  std::string value;

  static SimStep propose(std::size_t slot, std::string value) { return {StepKind::propose, slot, 0, std::move(value)}; }
  static SimStep merge(std::size_t from, std::size_t to) { return {StepKind::merge, to, from, {}}; }
  static SimStep restart(std::size_t slot) { return {StepKind::restart, slot, 0, {}}; }

  friend bool operator==(const SimStep&, const SimStep&) = default;
};

void to_json(nlohmann::json& j, const SimStep& s);
void from_json(const nlohmann::json& j, SimStep& s);
std::string describe(const SimStep& s);

using DecisionRow = std::vector<Agreement<nlohmann::json>>;

struct RunTrace {
  std::string protocol;
  std::uint64_t seed = 0;
  std::size_t replicas = 0;
  std::vector<SimStep> steps;
  std::vector<DecisionRow> decisions;  // one row per step, one entry per slot

  friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

void to_json(nlohmann::json& j, const RunTrace& t);
// Throws std::invalid_argument on a structurally broken trace.
void from_json(const nlohmann::json& j, RunTrace& t);

std::string format_trace(const RunTrace& t);

}  // namespace prdt::sim
