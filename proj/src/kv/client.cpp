#include "prdt/kv/client.hpp"

#include <thread>

#include <boost/asio.hpp>

namespace prdt::kv {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;

struct KvClient::Impl {
  asio::io_context io;
  tcp::socket socket{io};
  asio::streambuf buffer;
};

KvClient::KvClient(const std::string& host, std::uint16_t port, std::chrono::milliseconds connect_timeout)
    : impl_(std::make_unique<Impl>()) {
  tcp::resolver resolver(impl_->io);
  const auto endpoints = resolver.resolve(host, std::to_string(port));
  // The server may still be binding; retry until the timeout.
  const auto give_up = std::chrono::steady_clock::now() + connect_timeout;
  for (;;) {
    boost::system::error_code ec;
    asio::connect(impl_->socket, endpoints, ec);
    if (!ec) break;
    if (std::chrono::steady_clock::now() >= give_up) throw std::runtime_error("cannot connect to " + host + ":" + std::to_string(port) + ": " + ec.message());
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  impl_->socket.set_option(tcp::no_delay(true));
}

KvClient::~KvClient() = default;

ClientResponse KvClient::request(const ClientRequest& req) {
  const std::string line = nlohmann::json(req).dump() + "\n";
  asio::write(impl_->socket, asio::buffer(line));
  const auto n = asio::read_until(impl_->socket, impl_->buffer, '\n');
  std::string reply(asio::buffers_begin(impl_->buffer.data()), asio::buffers_begin(impl_->buffer.data()) + n);
  impl_->buffer.consume(n);
  return nlohmann::json::parse(reply).get<ClientResponse>();
}

}  // namespace prdt::kv
