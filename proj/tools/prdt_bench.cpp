#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "prdt/bench/bench.hpp"
#include "prdt/kv/client.hpp"

using namespace prdt;

int main(int argc, char** argv) {
  CLI::App app{"Sequential single-client benchmark for prdt-kvd"};
  std::string server;
  std::string workload = "write";
  std::string out_path;
  bench::Workload w;
  int repeat = 1;
  double warmup = 0.1;
  app.add_option("--server", server, "host:port of a replica")->required();
  app.add_option("--workload", workload, "read, write or mixed")->check(CLI::IsMember({"read", "write", "mixed"}));
  app.add_option("--ops", w.ops, "Operations per run")->check(CLI::PositiveNumber);
  app.add_option("--seed", w.seed, "Workload seed");
  app.add_option("--key-space", w.key_space, "Number of distinct keys")->check(CLI::PositiveNumber);
  app.add_option("--repeat", repeat, "Runs to accumulate")->check(CLI::PositiveNumber);
  app.add_option("--warmup", warmup, "Leading fraction of each run to drop")->check(CLI::Range(0.0, 0.99));
  app.add_option("--out", out_path, "CSV output file")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    w.kind = bench::parse_workload(workload);
    const auto requests = bench::generate(w);
    auto [host, port] = kv::parse_endpoint(server);
    kv::KvClient client(host, port);

    std::vector<bench::BenchRecord> all;
    std::vector<std::vector<bench::BenchRecord>> runs;
    std::optional<std::string> incomplete;
    for (int r = 0; r < repeat && !incomplete; ++r) {
      auto result = bench::run_workload(requests, [&](const kv::ClientRequest& req) { return client.request(req); });
      all.insert(all.end(), result.records.begin(), result.records.end());
      if (!result.records.empty()) runs.push_back(std::move(result.records));
      if (result.incomplete) incomplete = "run " + std::to_string(r) + ", " + *result.incomplete;
    }

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    bench::write_csv(out, all, incomplete);
    out.close();

    if (incomplete) std::cerr << "prdt-bench: incomplete: " << *incomplete << "\n";
    if (runs.empty()) return 1;
    std::cout << "workload=" << bench::to_string(w.kind) << " runs=" << runs.size() << " "
              << bench::format_summary(bench::summarize(runs, warmup)) << "\n";
    return incomplete ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "prdt-bench: " << e.what() << "\n";
    return 2;
  }
}
