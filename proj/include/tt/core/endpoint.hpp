#pragma once

#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "tt/core/channel.hpp"

namespace tt {

struct ClientConfig {
  netsim::Address server = 0;
  Secrets secrets;
  std::uint64_t seed = 0;
  ChannelTimeouts timeouts;
};

// Starts a client channel without running the simulator.
std::unique_ptr<Channel> connect_channel(const ValidatedStack& stack, netsim::Node& node,
                                         const ClientConfig& cfg);

// Starts a client channel and runs virtual time until it opens or fails.
Result<std::unique_ptr<Channel>, LayerError> open_channel(const ValidatedStack& stack, netsim::Node& node,
                                                          const ClientConfig& cfg);

// Runs virtual time until everything sent on `ch` is acknowledged.
Result<void, LayerError> flush(Channel& ch, netsim::Simulator& sim, netsim::TimeUs timeout);
// Runs virtual time until `n` bytes are readable, then returns them.
Result<Bytes, LayerError> recv_exact(Channel& ch, netsim::Simulator& sim, std::size_t n,
                                     netsim::TimeUs timeout);

using ServerApp = std::function<void(Channel&)>;
ServerApp echo_app();
ServerApp sink_app();

struct ServerConfig {
  Secrets secrets;
  std::uint64_t seed = 0;
  ChannelTimeouts timeouts;
  ServerApp app;
};

// Accepts connections on every port the stack's transport listens on.
class Server {
 public:
  Server(const ValidatedStack& stack, netsim::Node& node, ServerConfig cfg);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  const std::vector<std::uint16_t>& ports() const { return ports_; }
  std::size_t connection_count() const { return channels_.size(); }
  std::vector<Channel*> connections() const;
  Channel* connection(netsim::Address addr, std::uint16_t port) const;
  // Payload bytes this server has put on the wire to `addr`.
  std::uint64_t payload_bytes_to(netsim::Address addr) const;
  std::uint64_t payload_bytes_total() const;
  ServerState& state() { return state_; }

 private:
  void on_packet(const netsim::Packet& p);

  ValidatedStack stack_;
  netsim::Node& node_;
  ServerConfig cfg_;
  ServerState state_;
  std::vector<std::uint16_t> ports_;
  std::map<std::pair<netsim::Address, std::uint16_t>, std::unique_ptr<Channel>> channels_;
  std::map<netsim::Address, std::uint64_t> retired_bytes_;
  std::uint64_t next_seed_ = 0;
};

}  // namespace tt
