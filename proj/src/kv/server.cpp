#include "prdt/kv/server.hpp"

#include <atomic>
#include <deque>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>

namespace prdt::kv {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;

std::map<ReplicaId, Endpoint> parse_peers(const std::string& text) {
  std::map<ReplicaId, Endpoint> peers;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected uid=host:port, got '" + item + "'");
    auto [host, port] = parse_endpoint(item.substr(eq + 1));
    if (!peers.emplace(ReplicaId{item.substr(0, eq)}, Endpoint{host, port}).second) {
      throw std::invalid_argument("duplicate peer " + item.substr(0, eq));
    }
  }
  return peers;
}

namespace {

enum class Role { unknown, peer, client };

}  // namespace

struct KvServer::Impl : std::enable_shared_from_this<KvServer::Impl> {
  struct Connection : std::enable_shared_from_this<Connection> {
    Connection(Impl& owner, tcp::socket s) : server(owner), socket(std::move(s)) {}

    Impl& server;
    tcp::socket socket;
    asio::streambuf buffer;
    std::deque<std::string> outgoing;
    Role role = Role::unknown;
    ReplicaId peer;
    bool dialed = false;
    bool closed = false;

    void start() { read(); }

    void read() {
      asio::async_read_until(socket, buffer, '\n', [self = shared_from_this()](boost::system::error_code ec, std::size_t n) {
        if (ec) return self->close();
        std::string line(asio::buffers_begin(self->buffer.data()), asio::buffers_begin(self->buffer.data()) + n);
        self->buffer.consume(n);
        self->server.on_line(self, line);
        if (!self->closed) self->read();
      });
    }

    void send(std::string line) {
      if (closed) return;
      outgoing.push_back(std::move(line));
      if (outgoing.size() == 1) write();
    }

    void write() {
      asio::async_write(socket, asio::buffer(outgoing.front()), [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
        if (ec) return self->close();
        self->outgoing.pop_front();
        if (!self->outgoing.empty()) self->write();
      });
    }

    void close() {
      if (closed) return;
      closed = true;
      boost::system::error_code ignored;
      socket.close(ignored);
      server.on_closed(shared_from_this());
    }
  };
  using ConnectionPtr = std::shared_ptr<Connection>;

  explicit Impl(ServerConfig cfg)
      : config(std::move(cfg)),
        acceptor(io),
        tick_timer(io),
        replica(config.id, membership_of(config), config.options) {
    tcp::endpoint ep(asio::ip::make_address(config.listen.host.empty() ? "127.0.0.1" : config.listen.host), config.listen.port);
    acceptor.open(ep.protocol());
    acceptor.set_option(tcp::acceptor::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen();
  }

  static Membership membership_of(const ServerConfig& cfg) {
    Membership m;
    m.members.insert(cfg.id);
    for (const auto& [id, _] : cfg.peers) m.members.insert(id);
    return m;
  }

  void log(const std::string& what) {
    if (config.verbose) std::clog << "[" << config.id << "] " << what << "\n";
  }

  void begin() {
    accept();
    for (const auto& [id, endpoint] : config.peers) {
      if (config.id < id) dial(id);
    }
    tick();
    if (config.handle_signals) {
      signals.emplace(io, SIGINT, SIGTERM);
      signals->async_wait([self = shared_from_this()](boost::system::error_code ec, int) {
        if (!ec) self->shutdown();
      });
    }
  }

  void accept() {
    acceptor.async_accept([self = shared_from_this()](boost::system::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec != asio::error::operation_aborted) self->accept();
        return;
      }
      socket.set_option(tcp::no_delay(true));
      std::make_shared<Connection>(*self, std::move(socket))->start();
      self->accept();
    });
  }

  // The replica with the smaller id dials; the other side waits.
  void dial(const ReplicaId& id) {
    if (stopping) return;
    const auto& endpoint = config.peers.at(id);
    auto socket = std::make_shared<tcp::socket>(io);
    tcp::endpoint ep(asio::ip::make_address(endpoint.host), endpoint.port);
    socket->async_connect(ep, [self = shared_from_this(), socket, id](boost::system::error_code ec) {
      if (ec) return self->redial(id);
      socket->set_option(tcp::no_delay(true));
      auto conn = std::make_shared<Connection>(*self, std::move(*socket));
      conn->role = Role::peer;
      conn->peer = id;
      conn->dialed = true;
      self->register_peer(conn);
      conn->start();
    });
  }

  void redial(const ReplicaId& id) {
    if (stopping) return;
    auto timer = std::make_shared<asio::steady_timer>(io, std::chrono::milliseconds(100));
    timer->async_wait([self = shared_from_this(), timer, id](boost::system::error_code ec) {
      if (!ec) self->dial(id);
    });
  }

  void register_peer(const ConnectionPtr& conn) {
    auto& slot = peers[conn->peer];
    if (slot && slot != conn && !slot->closed) {
      auto old = slot;
      slot = conn;
      old->dialed = false;  // replaced, never redial for it
      old->close();
    }
    slot = conn;
    log("peer connected: " + conn->peer.value);
    dispatch(replica.on_peer_connected(conn->peer));
  }

  void on_closed(const ConnectionPtr& conn) {
    if (conn->role != Role::peer) return;
    auto it = peers.find(conn->peer);
    if (it != peers.end() && it->second == conn) {
      peers.erase(it);
      log("peer disconnected: " + conn->peer.value);
    }
    if (conn->dialed) redial(conn->peer);
  }

  void on_line(const ConnectionPtr& conn, const std::string& line) {
    nlohmann::json frame;
    try {
      frame = nlohmann::json::parse(line);
    } catch (const std::exception&) {
      log("dropping unparsable frame");
      if (conn->role == Role::client) conn->send(nlohmann::json(ClientResponse::error("malformed request")).dump() + "\n");
      return;
    }
    if (conn->role == Role::unknown) {
      if (frame.is_object() && frame.contains("op")) {
        conn->role = Role::client;
      } else if (frame.is_object() && frame.contains("sender")) {
        conn->role = Role::peer;
        try {
          conn->peer = frame.at("sender").get<ReplicaId>();
        } catch (const std::exception&) {
          return conn->close();
        }
        if (!config.peers.contains(conn->peer)) {
          log("rejecting unknown peer " + conn->peer.value);
          return conn->close();
        }
        register_peer(conn);
      } else {
        return conn->close();
      }
    }
    if (conn->role == Role::client) return on_client(conn, frame);
    try {
      dispatch(replica.on_envelope(frame.get<Envelope>(), Clock::now()));
    } catch (const std::exception& e) {
      log(std::string("dropping malformed envelope: ") + e.what());
    }
  }

  void on_client(const ConnectionPtr& conn, const nlohmann::json& frame) {
    ClientRequest request;
    try {
      request = frame.get<ClientRequest>();
    } catch (const std::exception& e) {
      conn->send(nlohmann::json(ClientResponse::error(e.what())).dump() + "\n");
      return;
    }
    const auto id = next_request++;
    clients[id] = conn;
    dispatch(replica.submit(id, request, Clock::now()));
  }

  void dispatch(Outbox out) {
    for (auto& m : out.messages) {
      const std::string line = nlohmann::json(m.envelope).dump() + "\n";
      if (m.to) {
        auto it = peers.find(*m.to);
        if (it != peers.end()) it->second->send(line);
        continue;
      }
      for (auto& [id, conn] : peers) {
        if (!m.except || id != *m.except) conn->send(line);
      }
    }
    for (auto& r : out.replies) {
      auto it = clients.find(r.request_id);
      if (it == clients.end()) continue;
      if (auto conn = it->second.lock()) conn->send(nlohmann::json(r.response).dump() + "\n");
      clients.erase(it);
    }
  }

  void tick() {
    tick_timer.expires_after(std::chrono::milliseconds(10));
    tick_timer.async_wait([self = shared_from_this()](boost::system::error_code ec) {
      if (ec || self->stopping) return;
      self->dispatch(self->replica.on_tick(Clock::now()));
      self->tick();
    });
  }

  void shutdown() {
    stopping = true;
    boost::system::error_code ignored;
    acceptor.close(ignored);
    tick_timer.cancel();
    if (signals) signals->cancel();
    for (auto& [_, conn] : peers) conn->dialed = false;
    auto open = peers;
    for (auto& [_, conn] : open) conn->close();
    io.stop();
  }

  template <class F>
  auto on_loop(F f) -> decltype(f()) {
    if (!running) return f();
    std::packaged_task<decltype(f())()> task(std::move(f));
    auto result = task.get_future();
    asio::post(io, [&task] { task(); });
    return result.get();
  }

  ServerConfig config;
  asio::io_context io;
  tcp::acceptor acceptor;
  asio::steady_timer tick_timer;
  std::optional<asio::signal_set> signals;
  KvReplica replica;
  std::map<ReplicaId, ConnectionPtr> peers;
  std::map<std::uint64_t, std::weak_ptr<Connection>> clients;
  std::uint64_t next_request = 1;
  bool stopping = false;
  std::atomic<bool> running{false};
  std::thread thread;
};

KvServer::KvServer(ServerConfig config) : impl_(std::make_shared<Impl>(std::move(config))) {}

KvServer::~KvServer() { stop(); }

std::uint16_t KvServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void KvServer::set_peer(const ReplicaId& id, Endpoint endpoint) {
  if (impl_->running) throw std::logic_error("set_peer after start");
  if (id == impl_->config.id) throw std::invalid_argument("a server is not its own peer");
  impl_->config.peers[id] = std::move(endpoint);
  impl_->replica = KvReplica(impl_->config.id, Impl::membership_of(impl_->config), impl_->config.options);
}

void KvServer::run() {
  impl_->running = true;
  impl_->begin();
  impl_->io.run();
  impl_->running = false;
}

void KvServer::start() {
  impl_->running = true;
  impl_->begin();
  impl_->thread = std::thread([impl = impl_] {
    impl->io.run();
  });
}

void KvServer::stop() {
  if (!impl_) return;
  if (impl_->thread.joinable()) {
    asio::post(impl_->io, [impl = impl_] { impl->shutdown(); });
    impl_->thread.join();
    impl_->running = false;
  } else if (!impl_->stopping) {
    asio::post(impl_->io, [impl = impl_] { impl->shutdown(); });
  }
}

std::vector<KvOperation> KvServer::log() {
  return impl_->on_loop([impl = impl_.get()] { return impl->replica.log(); });
}

ReplicaStats KvServer::stats() {
  return impl_->on_loop([impl = impl_.get()] { return impl->replica.stats(); });
}

std::uint64_t KvServer::epoch() {
  return impl_->on_loop([impl = impl_.get()] { return impl->replica.epoch(); });
}

}  // namespace prdt::kv
