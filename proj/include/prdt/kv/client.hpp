#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "prdt/kv/wire.hpp"

namespace prdt::kv {

// Blocking client: one request in flight, one connection.
class KvClient {
 public:
  KvClient(const std::string& host, std::uint16_t port,
           std::chrono::milliseconds connect_timeout = std::chrono::milliseconds(5000));
  ~KvClient();
  KvClient(const KvClient&) = delete;
  KvClient& operator=(const KvClient&) = delete;

  ClientResponse request(const ClientRequest& req);
  ClientResponse put(const std::string& key, const std::string& value) { return request(ClientRequest::put(key, value)); }
  ClientResponse get(const std::string& key) { return request(ClientRequest::get(key)); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace prdt::kv
