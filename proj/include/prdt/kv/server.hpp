#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "prdt/kv/replica.hpp"

namespace prdt::kv {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

struct ServerConfig {
  ReplicaId id;
  Endpoint listen;  // port 0 picks a free port
  std::map<ReplicaId, Endpoint> peers;
  ReplicaOptions options;
  bool verbose = false;
  bool handle_signals = false;  // stop on SIGINT/SIGTERM
};

// parses "uid=host:port,uid=host:port"; throws std::invalid_argument.
std::map<ReplicaId, Endpoint> parse_peers(const std::string& text);

// TCP front end for one KvReplica. One listening port serves peers and
// clients; the first frame on a connection tells them apart. All protocol
// work happens on a single event-loop thread.
class KvServer {
 public:
  explicit KvServer(ServerConfig config);  // binds the listening socket
  ~KvServer();
  KvServer(const KvServer&) = delete;
  KvServer& operator=(const KvServer&) = delete;

  std::uint16_t port() const;
  // Peers may be filled in after construction (before start/run), which lets
  // tests bind ephemeral ports first.
  void set_peer(const ReplicaId& id, Endpoint endpoint);

  void run();    // blocks until stop()
  void start();  // runs on a background thread
  void stop();

  // Snapshots taken on the event loop.
  std::vector<KvOperation> log();
  ReplicaStats stats();
  std::uint64_t epoch();

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace prdt::kv
