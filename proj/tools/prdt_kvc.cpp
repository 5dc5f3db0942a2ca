#include <iostream>

#include <CLI11.hpp>

#include "prdt/kv/client.hpp"

using namespace prdt::kv;

int main(int argc, char** argv) {
  CLI::App app{"Client for prdt-kvd"};
  app.require_subcommand(1);
  std::string server;
  app.add_option("--server", server, "host:port of any replica")->required();
  std::string key;
  std::string value;
  auto* put = app.add_subcommand("put", "Write a value");
  put->add_option("key", key)->required();
  put->add_option("value", value)->required();
  auto* get = app.add_subcommand("get", "Read a value");
  get->add_option("key", key)->required();
  CLI11_PARSE(app, argc, argv);

  try {
    auto [host, port] = parse_endpoint(server);
    KvClient client(host, port);
    const auto response = put->parsed() ? client.put(key, value) : client.get(key);
    std::cout << response.status;
    if (response.value) std::cout << " " << *response.value;
    std::cout << "\n";
    if (response.status == "ERROR") return 1;
    return response.status == "NOT_FOUND" ? 3 : 0;
  } catch (const std::exception& e) {
    std::cerr << "prdt-kvc: " << e.what() << "\n";
    return 2;
  }
}
