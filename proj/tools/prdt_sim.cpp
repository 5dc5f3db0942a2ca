#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prdt/sim/registry.hpp"

using namespace prdt::sim;

namespace {

void write_trace(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << nlohmann::json(trace).dump(2) << "\n";
}

int report(const SimReport& r, const std::string& trace_out) {
  std::cout << "protocol=" << r.protocol << " runs=" << r.runs << " decided_runs=" << r.decided_runs
            << " restarts=" << r.restarts << " violations=" << r.violations.size() << " result=" << (r.passed() ? "PASS" : "FAIL")
            << "\n";
  if (!r.passed()) {
    for (const auto& v : r.violations) std::cout << "violation " << v.kind << ": " << v.detail << "\n";
    std::cout << "counterexample:\n" << format_trace(*r.failure);
  }
  if (!trace_out.empty()) write_trace(trace_out, r.failure ? *r.failure : r.last_trace);
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random protocol simulation with safety oracles"};
  SimConfig cfg;
  std::string protocol = "paxos";
  std::string trace_out;
  std::string replay;
  app.add_option("--protocol", protocol, "Protocol under test")
      ->check(CLI::IsMember(protocol_names()));
  app.add_option("--replicas", cfg.replica_count, "Number of replicas")->check(CLI::Range(1, 64));
  app.add_option("--runs", cfg.runs, "Independent runs");
  app.add_option("--steps", cfg.steps_per_run, "Random steps per run");
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--propose-probability", cfg.propose_probability)->check(CLI::Range(0.0, 1.0));
  app.add_option("--values", cfg.value_pool, "Value pool")->delimiter(',');
  app.add_option("--stall-threshold", cfg.stall_threshold, "Idle steps before a restart is injected (0 = off)");
  app.add_option("--epilogue-rounds", cfg.epilogue_rounds, "All-pairs merge rounds after the random steps");
  app.add_flag("--propose-then-upkeep", cfg.propose_then_upkeep);
  app.add_option("--trace-out", trace_out, "Write the failing (or last) trace as JSON");
  app.add_option("--replay", replay, "Replay a JSON trace instead of generating runs")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    if (!replay.empty()) {
      std::ifstream in(replay);
      RunTrace trace = nlohmann::json::parse(in).get<RunTrace>();
      return report(replay_protocol(trace), trace_out);
    }
    return report(run_protocol(protocol, cfg), trace_out);
  } catch (const std::exception& e) {
    std::cerr << "prdt-sim: " << e.what() << "\n";
    return 2;
  }
}
