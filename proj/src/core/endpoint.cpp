#include "tt/core/endpoint.hpp"

#include "tt/core/registry.hpp"

namespace tt {

std::unique_ptr<Channel> connect_channel(const ValidatedStack& stack, netsim::Node& node, const ClientConfig& cfg) {
  LayerContext ctx;
  ctx.role = Role::client;
  ctx.sim = &node.sim();
  ctx.node = &node;
  ctx.peer = cfg.server;
  ctx.seed = cfg.seed;
  ctx.secrets = &cfg.secrets;
  ctx.timeouts = cfg.timeouts;
  auto ch = std::make_unique<Channel>(stack, ctx);
  ch->start();
  return ch;
}

Result<std::unique_ptr<Channel>, LayerError> open_channel(const ValidatedStack& stack, netsim::Node& node,
                                                          const ClientConfig& cfg) {
  auto ch = connect_channel(stack, node, cfg);
  netsim::Simulator& sim = node.sim();
  const netsim::TimeUs deadline = sim.now() + cfg.timeouts.handshake + netsim::from_seconds(1);
  sim.run_while([&] { return ch->state() == ChannelState::opening; }, deadline);
  if (ch->state() == ChannelState::failed) return fail(*ch->error());
  if (ch->state() != ChannelState::open) return fail(make_error(ErrorKind::transport, "channel did not open"));
  return ch;
}

Result<void, LayerError> flush(Channel& ch, netsim::Simulator& sim, netsim::TimeUs timeout) {
  sim.run_while([&] { return !ch.terminal() && !ch.flushed(); }, sim.now() + timeout);
  if (ch.state() == ChannelState::failed) return fail(*ch.error());
  if (ch.state() == ChannelState::closed) return fail(make_error(ErrorKind::closed, "channel closed"));
  if (!ch.flushed()) return fail(make_error(ErrorKind::transport, "send timed out"));
  return {};
}

Result<Bytes, LayerError> recv_exact(Channel& ch, netsim::Simulator& sim, std::size_t n, netsim::TimeUs timeout) {
  sim.run_while([&] { return !ch.terminal() && ch.available() < n; }, sim.now() + timeout);
  if (ch.available() >= n) return ch.recv(n);
  if (ch.terminal()) {
    auto r = ch.recv(0);
    if (!r) return fail(r.error());
  }
  return fail(make_error(ErrorKind::transport, "receive timed out"));
}

ServerApp echo_app() {
  return [](Channel& ch) {
    auto data = ch.recv();
    if (data && !data->empty()) (void)ch.send(*data);
  };
}

ServerApp sink_app() {
  return [](Channel& ch) { (void)ch.recv(); };
}

Server::Server(const ValidatedStack& stack, netsim::Node& node, ServerConfig cfg)
    : stack_(stack), node_(node), cfg_(std::move(cfg)) {
  const LayerImplementation* trn = stack_.registry().find(LayerKind::transport, stack_.transport().impl);
  if (trn != nullptr && trn->listen_ports) ports_ = trn->listen_ports(stack_.transport());
  for (std::uint16_t port : ports_) node_.bind(port, [this](const netsim::Packet& p) { on_packet(p); });
}

Server::~Server() {
  for (std::uint16_t port : ports_) node_.unbind(port);
}

void Server::on_packet(const netsim::Packet& p) {
  const auto remote = std::make_pair(p.key.src_addr, p.key.src_port);
  auto it = channels_.find(remote);
  if (it != channels_.end() && !(it->second->terminal() && p.kind == netsim::PacketKind::handshake)) {
    it->second->receive(p);
    return;
  }
  if (p.kind != netsim::PacketKind::handshake) return;
  if (it != channels_.end()) {
    retired_bytes_[p.key.src_addr] += it->second->stats().transport.payload_bytes_sent;
    channels_.erase(it);
  }
  LayerContext ctx;
  ctx.role = Role::server;
  ctx.sim = &node_.sim();
  ctx.node = &node_;
  ctx.peer = p.key.src_addr;
  ctx.peer_port = p.key.src_port;
  ctx.seed = derive_seed(cfg_.seed, next_seed_++);
  ctx.secrets = &cfg_.secrets;
  ctx.server_state = &state_;
  ctx.timeouts = cfg_.timeouts;
  auto ch = std::make_unique<Channel>(stack_, ctx);
  if (cfg_.app) ch->set_on_readable(cfg_.app);
  Channel& ref = *ch;
  channels_.emplace(remote, std::move(ch));
  ref.accept(p);
}

std::vector<Channel*> Server::connections() const {
  std::vector<Channel*> out;
  for (const auto& [k, ch] : channels_) out.push_back(ch.get());
  return out;
}

Channel* Server::connection(netsim::Address addr, std::uint16_t port) const {
  auto it = channels_.find({addr, port});
  return it == channels_.end() ? nullptr : it->second.get();
}

std::uint64_t Server::payload_bytes_to(netsim::Address addr) const {
  std::uint64_t total = 0;
  if (auto it = retired_bytes_.find(addr); it != retired_bytes_.end()) total = it->second;
  for (const auto& [k, ch] : channels_)
    if (k.first == addr) total += ch->stats().transport.payload_bytes_sent;
  return total;
}

std::uint64_t Server::payload_bytes_total() const {
  std::uint64_t total = 0;
  for (const auto& [a, n] : retired_bytes_) total += n;
  for (const auto& [k, ch] : channels_) total += ch->stats().transport.payload_bytes_sent;
  return total;
}

}  // namespace tt
