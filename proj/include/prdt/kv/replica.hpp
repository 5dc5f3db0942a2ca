#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "prdt/kv/wire.hpp"
#include "prdt/protocols/multi_paxos.hpp"

namespace prdt::kv {

using Clock = std::chrono::steady_clock;
using TimePoint = Clock::time_point;

struct ReplicaOptions {
  std::chrono::milliseconds election_timeout{500};
  std::chrono::milliseconds request_timeout{10000};
};

struct PeerMessage {
  std::optional<ReplicaId> to;      // unset: every peer
  std::optional<ReplicaId> except;  // with `to` unset: skip this peer
  Envelope envelope;
};

struct Reply {
  std::uint64_t request_id = 0;
  ClientResponse response;
};

struct Outbox {
  std::vector<PeerMessage> messages;
  std::vector<Reply> replies;
};

struct ReplicaStats {
  std::uint64_t restarts = 0;
  std::uint64_t sync_requests = 0;
  std::uint64_t dropped = 0;    // malformed or foreign envelopes
  std::uint64_t conflicts = 0;  // prefix disagreements seen in sync responses
};

// The key-value replica as a pure state machine over a MultiPaxos log. The
// caller owns I/O and time; every input returns what to send.
class KvReplica {
 public:
  using State = MultiPaxos<KvOperation>;

  KvReplica(ReplicaId id, Membership membership, ReplicaOptions options = {});

  Outbox submit(std::uint64_t request_id, const ClientRequest& request, TimePoint now);
  Outbox on_envelope(const Envelope& envelope, TimePoint now);
  Outbox on_tick(TimePoint now);
  Outbox on_peer_connected(const ReplicaId& peer);

  const State& state() const { return state_; }
  // Decided operations, contiguous from epoch 0.
  const std::vector<KvOperation>& log() const { return log_; }
  std::uint64_t epoch() const { return state_.counter(); }
  bool has_gap() const { return log_.size() < state_.counter(); }
  std::size_t pending_requests() const { return queue_.size(); }
  const ReplicaContext& context() const { return ctx_; }
  const ReplicaStats& stats() const { return stats_; }

 private:
  struct Request {
    std::uint64_t id;
    KvOperation op;
    TimePoint deadline;
  };

  void apply_own(const State& delta, Outbox& out);
  void drive(TimePoint now, Outbox& out);
  bool record_decision();
  void insert_decided(std::uint64_t epoch, const KvOperation& op);
  bool complete_front(TimePoint now, Outbox& out);
  ClientResponse answer(const KvOperation& op, std::size_t position) const;
  Envelope sync_request() const;
  Envelope sync_response(std::size_t have) const;
  void arm_timer(TimePoint now);

  ReplicaContext ctx_;
  ReplicaOptions options_;
  State state_;
  std::map<std::uint64_t, KvOperation> decided_;
  std::vector<KvOperation> log_;
  std::map<std::uint64_t, std::uint64_t> own_positions_;  // seq -> epoch
  std::deque<Request> queue_;
  std::uint64_t next_seq_ = 1;
  std::optional<std::uint64_t> proposed_in_;  // epoch of the last own proposal
  TimePoint deadline_{};                      // election timer for the front request
  std::mt19937_64 jitter_;
  ReplicaStats stats_;
};

}  // namespace prdt::kv
