#include <iostream>

#include <CLI11.hpp>

#include "prdt/kv/server.hpp"

using namespace prdt::kv;

int main(int argc, char** argv) {
  CLI::App app{"Replicated key-value server"};
  std::string id;
  std::string listen;
  std::string peers;
  int election_timeout_ms = 500;
  int request_timeout_ms = 10000;
  bool verbose = false;
  app.add_option("--id", id, "Replica uid")->required();
  app.add_option("--listen", listen, "host:port to listen on")->required();
  app.add_option("--peers", peers, "Other replicas as uid=host:port,...");
  app.add_option("--election-timeout-ms", election_timeout_ms, "Base election timeout")->check(CLI::PositiveNumber);
  app.add_option("--request-timeout-ms", request_timeout_ms, "Client request timeout")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "Log connection events to stderr");
  CLI11_PARSE(app, argc, argv);

  try {
    ServerConfig cfg;
    cfg.id = prdt::ReplicaId{id};
    auto [host, port] = parse_endpoint(listen);
    cfg.listen = {host, port};
    cfg.peers = parse_peers(peers);
    if (cfg.peers.contains(cfg.id)) cfg.peers.erase(cfg.id);
    cfg.options.election_timeout = std::chrono::milliseconds(election_timeout_ms);
    cfg.options.request_timeout = std::chrono::milliseconds(request_timeout_ms);
    cfg.verbose = verbose;
    cfg.handle_signals = true;

    KvServer server(cfg);
    std::cerr << "prdt-kvd " << id << " listening on " << host << ":" << server.port() << " with " << cfg.peers.size()
              << " peers\n";
    server.run();
  } catch (const std::exception& e) {
    std::cerr << "prdt-kvd: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
