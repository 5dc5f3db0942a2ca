#include "prdt/kv/replica.hpp"

#include <functional>

namespace prdt::kv {

namespace {

Envelope make(const ReplicaId& sender, EnvelopeKind kind, nlohmann::json payload) {
  return Envelope{sender, kind, std::move(payload)};
}

}  // namespace

KvReplica::KvReplica(ReplicaId id, Membership membership, ReplicaOptions options)
    : ctx_{std::move(id), std::move(membership)},
      options_(options),
      jitter_(std::hash<std::string>{}(ctx_.replica_id.value)) {
  ctx_.membership.require_nonempty();
  if (!ctx_.membership.contains(ctx_.replica_id)) throw std::invalid_argument("replica is not in its own membership");
}

void KvReplica::arm_timer(TimePoint now) {
  // Randomized in [T, 2T) so that competing proposers back off differently.
  const auto base = options_.election_timeout.count();
  const auto extra = base > 0 ? std::uniform_int_distribution<long long>(0, base - 1)(jitter_) : 0;
  deadline_ = now + std::chrono::milliseconds(base + extra);
}

void KvReplica::apply_own(const State& delta, Outbox& out) {
  if (is_bottom(delta)) return;
  state_ = merge(state_, delta);
  out.messages.push_back({std::nullopt, std::nullopt, make(ctx_.replica_id, EnvelopeKind::delta, delta)});
}

void KvReplica::insert_decided(std::uint64_t epoch, const KvOperation& op) {
  auto [it, inserted] = decided_.emplace(epoch, op);
  if (!inserted && !(it->second == op)) {
    ++stats_.conflicts;
    return;
  }
  if (op.origin == ctx_.replica_id) own_positions_.emplace(op.seq, epoch);
  while (decided_.contains(log_.size())) log_.push_back(decided_.at(log_.size()));
}

bool KvReplica::record_decision() {
  const auto d = state_.decision(ctx_.membership);
  if (!d.is_decided() || decided_.contains(state_.counter())) return false;
  insert_decided(state_.counter(), d.value());
  return true;
}

// GET answers with the latest write to its key before its own log position.
ClientResponse KvReplica::answer(const KvOperation& op, std::size_t position) const {
  if (op.kind == OpKind::write) return ClientResponse::ok();
  for (std::size_t i = position; i-- > 0;) {
    if (log_[i].kind == OpKind::write && log_[i].key == op.key) return ClientResponse::found(log_[i].value);
  }
  return ClientResponse::not_found();
}

bool KvReplica::complete_front(TimePoint now, Outbox& out) {
  if (queue_.empty()) return false;
  const auto& front = queue_.front();
  auto pos = own_positions_.find(front.op.seq);
  if (pos == own_positions_.end() || log_.size() <= pos->second) return false;
  out.replies.push_back({front.id, answer(front.op, pos->second)});
  queue_.pop_front();
  proposed_in_.reset();
  arm_timer(now);
  return true;
}

void KvReplica::drive(TimePoint now, Outbox& out) {
  for (;;) {
    record_decision();
    if (complete_front(now, out)) continue;

    if (state_.current().is_decided(ctx_.membership)) {
      // Send the decided epoch as a whole first, so that a peer jumping to the
      // next epoch on the same connection has already seen the decision.
      out.messages.push_back({std::nullopt, std::nullopt, make(ctx_.replica_id, EnvelopeKind::delta, state_)});
      apply_own(state_.next_decision(ctx_), out);
      continue;
    }

    const bool waiting = !queue_.empty() && !own_positions_.contains(queue_.front().op.seq) && !has_gap();
    std::optional<KvOperation> pending;
    if (waiting) pending = queue_.front().op;

    if (waiting && proposed_in_ != state_.counter()) {
      proposed_in_ = state_.counter();
      arm_timer(now);
      apply_own(Consensus<State>::propose(state_, *pending, ctx_), out);
      continue;
    }

    State delta = state_.upkeep(ctx_, pending);
    if (is_bottom(delta)) break;
    apply_own(delta, out);
  }
}

Outbox KvReplica::submit(std::uint64_t request_id, const ClientRequest& request, TimePoint now) {
  Outbox out;
  KvOperation op = request.op == "PUT" ? KvOperation::write(request.key, request.value.value_or(""), ctx_.replica_id, next_seq_)
                                       : KvOperation::read(request.key, ctx_.replica_id, next_seq_);
  ++next_seq_;
  queue_.push_back({request_id, std::move(op), now + options_.request_timeout});
  if (queue_.size() == 1) arm_timer(now);
  drive(now, out);
  return out;
}

Envelope KvReplica::sync_request() const {
  return make(ctx_.replica_id, EnvelopeKind::sync_request, {{"have", log_.size()}});
}

Envelope KvReplica::sync_response(std::size_t have) const {
  nlohmann::json decided = nlohmann::json::array();
  for (auto it = decided_.lower_bound(have); it != decided_.end(); ++it) decided.push_back(nlohmann::json::array({it->first, it->second}));
  return make(ctx_.replica_id, EnvelopeKind::sync_response, {{"state", state_}, {"decided", std::move(decided)}});
}

Outbox KvReplica::on_envelope(const Envelope& envelope, TimePoint now) {
  Outbox out;
  if (envelope.sender == ctx_.replica_id || !ctx_.membership.contains(envelope.sender)) {
    ++stats_.dropped;
    return out;
  }
  const bool had_gap = has_gap();
  try {
    switch (envelope.kind) {
      case EnvelopeKind::delta: {
        const State before = state_;
        state_ = merge(state_, envelope.payload.get<State>());
        if (state_ == before) return out;
        // Relay so that peers without a direct link still converge.
        out.messages.push_back({std::nullopt, envelope.sender, envelope});
        break;
      }
      case EnvelopeKind::sync_request:
        out.messages.push_back({envelope.sender, std::nullopt, sync_response(envelope.payload.value("have", std::size_t{0}))});
        return out;
      case EnvelopeKind::sync_response:
        for (const auto& entry : envelope.payload.at("decided")) {
          insert_decided(entry.at(0).get<std::uint64_t>(), entry.at(1).get<KvOperation>());
        }
        state_ = merge(state_, envelope.payload.at("state").get<State>());
        break;
    }
  } catch (const std::exception&) {
    ++stats_.dropped;
    return out;
  }
  drive(now, out);
  if (has_gap() && !had_gap) {
    ++stats_.sync_requests;
    out.messages.push_back({envelope.sender, std::nullopt, sync_request()});
  }
  return out;
}

Outbox KvReplica::on_tick(TimePoint now) {
  Outbox out;
  while (!queue_.empty() && now >= queue_.front().deadline) {
    out.replies.push_back({queue_.front().id, ClientResponse::error("timeout")});
    queue_.pop_front();
    proposed_in_.reset();
    arm_timer(now);
  }
  if (queue_.empty() || now < deadline_) {
    drive(now, out);
    return out;
  }
  arm_timer(now);
  if (has_gap()) {
    ++stats_.sync_requests;
    out.messages.push_back({std::nullopt, std::nullopt, sync_request()});
  } else if (!own_positions_.contains(queue_.front().op.seq)) {
    // No decision within the timeout: start a new ballot.
    ++stats_.restarts;
    proposed_in_ = state_.counter();
    apply_own(Consensus<State>::restart(state_, ctx_), out);
  }
  drive(now, out);
  return out;
}

Outbox KvReplica::on_peer_connected(const ReplicaId& peer) {
  Outbox out;
  ++stats_.sync_requests;
  out.messages.push_back({peer, std::nullopt, sync_request()});
  return out;
}

}  // namespace prdt::kv
