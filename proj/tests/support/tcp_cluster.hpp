#pragma once

#include <memory>
#include <vector>

#include "prdt/kv/server.hpp"

namespace prdt::testnet {

// n KvServers on ephemeral loopback ports, each on its own event-loop thread.
class TcpCluster {
 public:
  explicit TcpCluster(std::size_t n, kv::ReplicaOptions options = {}) {
    for (std::size_t i = 0; i < n; ++i) {
      kv::ServerConfig cfg;
      cfg.id = id(i);
      cfg.listen = {"127.0.0.1", 0};
      cfg.options = options;
      servers_.push_back(std::make_unique<kv::KvServer>(cfg));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) servers_[i]->set_peer(id(j), {"127.0.0.1", servers_[j]->port()});
      }
    }
    for (auto& s : servers_) s->start();
  }
  ~TcpCluster() {
    for (auto& s : servers_) s->stop();
  }

  static ReplicaId id(std::size_t i) { return ReplicaId{"id" + std::to_string(i + 1)}; }
  std::size_t size() const { return servers_.size(); }
  kv::KvServer& server(std::size_t i) { return *servers_.at(i); }
  std::uint16_t port(std::size_t i) const { return servers_.at(i)->port(); }

 private:
  std::vector<std::unique_ptr<kv::KvServer>> servers_;
};

}  // namespace prdt::testnet
