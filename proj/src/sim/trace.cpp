#include "prdt/sim/trace.hpp"

#include <sstream>
#include <stdexcept>

namespace prdt::sim {

void to_json(nlohmann::json& j, const SimStep& s) {
  switch (s.kind) {
    case StepKind::propose: j = {{"kind", "propose"}, {"slot", s.slot}, {"value", s.value}}; break;
    case StepKind::merge: j = {{"kind", "merge"}, {"from", s.from}, {"to", s.slot}}; break;
    case StepKind::restart: j = {{"kind", "restart"}, {"slot", s.slot}}; break;
  }
}

void from_json(const nlohmann::json& j, SimStep& s) {
  if (!j.is_object()) throw std::invalid_argument("step must be an object");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "propose") {
    s = SimStep::propose(j.at("slot").get<std::size_t>(), j.at("value").get<std::string>());
  } else if (kind == "merge") {
    s = SimStep::merge(j.at("from").get<std::size_t>(), j.at("to").get<std::size_t>());
  } else if (kind == "restart") {
    s = SimStep::restart(j.at("slot").get<std::size_t>());
  } else {
    throw std::invalid_argument("unknown step kind: " + kind);
  }
}

std::string describe(const SimStep& s) {
  std::ostringstream out;
  switch (s.kind) {
    case StepKind::propose: out << "propose(slot=" << s.slot << ", value=" << s.value << ")"; break;
    case StepKind::merge: out << "merge+upkeep(" << s.from << " -> " << s.slot << ")"; break;
    case StepKind::restart: out << "restart(slot=" << s.slot << ")"; break;
  }
  return out.str();
}

void to_json(nlohmann::json& j, const RunTrace& t) {
  j = {{"protocol", t.protocol}, {"seed", t.seed}, {"replicas", t.replicas}, {"steps", t.steps}, {"decisions", t.decisions}};
}

void from_json(const nlohmann::json& j, RunTrace& t) {
  try {
    t.protocol = j.at("protocol").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.replicas = j.at("replicas").get<std::size_t>();
    t.steps = j.at("steps").get<std::vector<SimStep>>();
    t.decisions.clear();
    if (j.contains("decisions")) t.decisions = j.at("decisions").get<std::vector<DecisionRow>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed trace: ") + e.what());
  }
  if (t.replicas == 0) throw std::invalid_argument("malformed trace: replicas must be positive");
  for (const auto& s : t.steps) {
    if (s.slot >= t.replicas || (s.kind == StepKind::merge && (s.from >= t.replicas || s.from == s.slot))) {
      throw std::invalid_argument("malformed trace: bad slot in " + describe(s));
    }
  }
  if (!t.decisions.empty() && t.decisions.size() != t.steps.size()) {
    throw std::invalid_argument("malformed trace: decisions do not match steps");
  }
}

std::string format_trace(const RunTrace& t) {
  std::ostringstream out;
  out << t.protocol << " seed=" << t.seed << " replicas=" << t.replicas << "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    out << "  step " << i + 1 << ": " << describe(t.steps[i]);
    if (i < t.decisions.size()) {
      out << "  [";
      for (std::size_t k = 0; k < t.decisions[i].size(); ++k) {
        const auto& d = t.decisions[i][k];
        out << (k ? ", " : "") << to_string(d.kind());
        if (d.is_decided()) out << ":" << d.value().dump();
      }
      out << "]";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace prdt::sim
