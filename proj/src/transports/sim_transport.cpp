#include "tt/transports/sim_transport.hpp"

#include <algorithm>
#include <cmath>

#include "tt/util/crypto.hpp"

namespace tt::transports {

using netsim::Packet;
using netsim::PacketKind;
using netsim::TimeUs;

PortPolicy PortPolicy::fixed_port(std::uint16_t port) {
  PortPolicy p;
  p.fixed = port;
  return p;
}

PortPolicy PortPolicy::hopping(std::uint64_t seed, std::uint16_t lo, std::uint16_t hi) {
  PortPolicy p;
  p.fixed = lo;
  for (std::uint32_t port = lo; port <= hi; ++port) p.hop_ports.push_back(static_cast<std::uint16_t>(port));
  Bytes s;
  put_u64(s, seed);
  p.hop_key = crypto::hkdf(s, {}, "port hopping key", 32);
  return p;
}

std::uint16_t PortPolicy::port_for(std::uint64_t packet_index) const {
  if (!is_hopping()) return fixed;
  Bytes msg;
  put_u64(msg, packet_index);
  const std::uint64_t r = get_u64(crypto::hmac_sha256(hop_key, msg));
  return hop_ports[r % hop_ports.size()];
}

std::vector<std::uint16_t> PortPolicy::listen_ports() const {
  return is_hopping() ? hop_ports : std::vector<std::uint16_t>{fixed};
}

std::vector<std::uint16_t> hop_sequence(const PortPolicy& policy, std::size_t n) {
  std::vector<std::uint16_t> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(policy.port_for(i));
  return out;
}

SimTransport::SimTransport(const LayerContext& ctx, SimTransportOptions opts)
    : ctx_(ctx),
      opts_(std::move(opts)),
      client_(ctx.role == Role::client),
      rto_(opts_.rto_initial),
      alive_(std::make_shared<bool>(true)) {
  local_addr_ = ctx_.node->address();
}

SimTransport::~SimTransport() { close(); }

void SimTransport::close() {
  if (closed_) return;
  closed_ = true;
  ++rto_gen_;
  queue_.clear();
  unacked_.clear();
  syn_unacked_ = false;
  if (bound_) {
    ctx_.node->unbind(local_port_);
    bound_ = false;
  }
}

void SimTransport::connect() {
  local_port_ = ctx_.node->ephemeral_port();
  std::weak_ptr<bool> alive = alive_;
  ctx_.node->bind(local_port_, [this, alive](const Packet& p) {
    if (!alive.expired()) receive(p);
  });
  bound_ = true;
  ctx_.sim->schedule_in(0, [this, alive] {
    if (!alive.expired()) kick();
  });
}

void SimTransport::kick() {
  if (closed_ || started_) return;
  started_ = true;
  if (queue_.empty()) {
    send_empty(PacketKind::handshake, opts_.ttl);
    syn_unacked_ = true;
    syn_first_sent_ = ctx_.sim->now();
  } else {
    Pending first = std::move(queue_.front());
    queue_.pop_front();
    Segment s{snd_nxt_, std::move(first.data), PacketKind::handshake, 0, false};
    snd_nxt_ += static_cast<std::uint32_t>(s.data.size());
    unacked_.push_back(std::move(s));
    transmit(unacked_.back());
  }
  if (opts_.ttl_rst) send_empty(PacketKind::rst, opts_.ttl_rst_value);
  try_send();
  arm_rto();
}

void SimTransport::accept(const Packet& first) {
  local_addr_ = first.deflected_from.value_or(first.key.dst_addr);
  local_port_ = first.key.dst_port;
  started_ = true;
  established_ = true;
  receive(first);
}

netsim::FlowKey SimTransport::next_key() {
  const std::uint16_t remote_or_local = opts_.ports.is_hopping() ? opts_.ports.port_for(packet_index_) : 0;
  ++packet_index_;
  if (client_) {
    return {local_addr_, local_port_, ctx_.peer, opts_.ports.is_hopping() ? remote_or_local : opts_.ports.fixed};
  }
  return {local_addr_, opts_.ports.is_hopping() ? remote_or_local : local_port_, ctx_.peer, ctx_.peer_port};
}

void SimTransport::send_empty(PacketKind kind, int ttl) {
  Packet p;
  p.key = next_key();
  p.kind = kind;
  p.ttl = ttl;
  p.seq = snd_nxt_;
  p.ack = rcv_next_;
  ++stats_.packets_sent;
  ctx_.node->send(std::move(p));
}

void SimTransport::transmit(Segment& s) {
  const TimeUs now = ctx_.sim->now();
  if (s.first_sent == 0 && !s.retransmitted) s.first_sent = now;
  Packet p;
  p.key = next_key();
  p.kind = s.kind;
  p.ttl = opts_.ttl;
  p.seq = s.seq;
  p.ack = rcv_next_;
  p.payload = s.data;
  ++stats_.packets_sent;
  stats_.payload_bytes_sent += s.data.size();
  ctx_.node->send(std::move(p));
}

void SimTransport::send_segment(Bytes segment) {
  if (closed_) return;
  if (segment.empty()) return;
  for (std::size_t pos = 0; pos < segment.size(); pos += opts_.mss) {
    const std::size_t n = std::min(opts_.mss, segment.size() - pos);
    queue_.push_back(Pending{Bytes(segment.begin() + static_cast<std::ptrdiff_t>(pos),
                                   segment.begin() + static_cast<std::ptrdiff_t>(pos + n)),
                             false});
  }
  try_send();
}

void SimTransport::send_stream(ByteView data) {
  if (closed_) return;
  std::size_t pos = 0;
  if (!queue_.empty() && queue_.back().stream && queue_.back().data.size() < opts_.mss) {
    Bytes& tail = queue_.back().data;
    const std::size_t n = std::min(opts_.mss - tail.size(), data.size());
    tail.insert(tail.end(), data.begin(), data.begin() + static_cast<std::ptrdiff_t>(n));
    pos = n;
  }
  for (; pos < data.size(); pos += opts_.mss) {
    const std::size_t n = std::min(opts_.mss, data.size() - pos);
    queue_.push_back(Pending{Bytes(data.begin() + static_cast<std::ptrdiff_t>(pos),
                                   data.begin() + static_cast<std::ptrdiff_t>(pos + n)),
                             true});
  }
  try_send();
}

void SimTransport::try_send() {
  if (!started_ || closed_) return;
  while (!queue_.empty() && unacked_.size() < opts_.window) {
    Pending next = std::move(queue_.front());
    queue_.pop_front();
    Segment s{snd_nxt_, std::move(next.data), PacketKind::data, 0, false};
    snd_nxt_ += static_cast<std::uint32_t>(s.data.size());
    unacked_.push_back(std::move(s));
    transmit(unacked_.back());
  }
  if (!rto_armed_ && !unacked_.empty()) arm_rto();
}

void SimTransport::arm_rto() {
  if (closed_ || (unacked_.empty() && !syn_unacked_)) {
    rto_armed_ = false;
    ++rto_gen_;
    return;
  }
  const TimeUs now = ctx_.sim->now();
  TimeUs oldest = syn_unacked_ ? syn_first_sent_ : now;
  if (!unacked_.empty()) oldest = std::min(oldest, unacked_.front().first_sent);
  const TimeUs give_up = oldest + ctx_.timeouts.send;
  const TimeUs at = std::max(now, std::min(now + rto_, give_up));
  const std::uint64_t gen = ++rto_gen_;
  rto_armed_ = true;
  std::weak_ptr<bool> alive = alive_;
  ctx_.sim->schedule_at(at, [this, alive, gen] {
    if (alive.expired() || gen != rto_gen_) return;
    rto_armed_ = false;
    on_rto();
  });
}

void SimTransport::on_rto() {
  if (closed_ || (unacked_.empty() && !syn_unacked_)) return;
  const TimeUs now = ctx_.sim->now();
  TimeUs oldest = syn_unacked_ ? syn_first_sent_ : now;
  if (!unacked_.empty()) oldest = std::min(oldest, unacked_.front().first_sent);
  if (now >= oldest + ctx_.timeouts.send) {
    raise(make_error(ErrorKind::transport, "send timed out: no acknowledgement from peer"));
    return;
  }
  rto_ = std::min(rto_ * 2, opts_.rto_max);
  if (syn_unacked_) send_empty(PacketKind::handshake, opts_.ttl);
  for (Segment& s : unacked_) {
    s.retransmitted = true;
    ++stats_.retransmissions;
    transmit(s);
  }
  arm_rto();
}

void SimTransport::on_ack(std::uint32_t ack) {
  bool progressed = false;
  std::optional<TimeUs> sample;
  while (!unacked_.empty() && unacked_.front().seq + unacked_.front().data.size() <= ack) {
    const Segment& s = unacked_.front();
    // Karn: no samples from retransmitted segments.
    if (!s.retransmitted) sample = ctx_.sim->now() - s.first_sent;
    unacked_.pop_front();
    progressed = true;
  }
  if (sample) {
    const double r = static_cast<double>(*sample);
    if (!have_rtt_) {
      srtt_ = r;
      rttvar_ = r / 2;
      have_rtt_ = true;
    } else {
      rttvar_ = 0.75 * rttvar_ + 0.25 * std::abs(srtt_ - r);
      srtt_ = 0.875 * srtt_ + 0.125 * r;
    }
    rto_ = std::clamp(static_cast<TimeUs>(srtt_ + 4 * rttvar_), opts_.rto_min, opts_.rto_max);
  }
  if (progressed) {
    arm_rto();
    try_send();
  }
}

void SimTransport::raise(LayerError e) {
  if (closed_) return;
  close();
  if (cb_.error) cb_.error(std::move(e));
}

void SimTransport::receive(const Packet& p) {
  if (closed_) return;
  heard_ = true;
  if (p.kind == PacketKind::rst) {
    if (!opts_.ignore_rst) raise(make_error(ErrorKind::transport, "connection reset"));
    return;
  }
  if (client_ && syn_unacked_) {
    syn_unacked_ = false;
    arm_rto();
  }
  if (!established_) {
    established_ = true;
    if (cb_.established) cb_.established();
    if (closed_) return;
  }
  on_ack(p.ack);
  if (closed_) return;

  const bool needs_ack = !p.payload.empty() || p.kind == PacketKind::handshake;
  std::vector<Bytes> ready;
  if (!p.payload.empty() && p.seq >= rcv_next_) {
    out_of_order_.emplace(p.seq, p.payload);
    for (auto it = out_of_order_.find(rcv_next_); it != out_of_order_.end(); it = out_of_order_.find(rcv_next_)) {
      rcv_next_ += static_cast<std::uint32_t>(it->second.size());
      stats_.payload_bytes_received += it->second.size();
      ready.push_back(std::move(it->second));
      out_of_order_.erase(it);
    }
  }
  if (needs_ack) send_empty(PacketKind::data, opts_.ttl);
  for (Bytes& seg : ready) {
    if (closed_) return;
    if (cb_.segment) cb_.segment(std::move(seg));
  }
}

}  // namespace tt::transports
