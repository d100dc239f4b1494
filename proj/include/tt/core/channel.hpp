#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "tt/core/error.hpp"
#include "tt/core/layer.hpp"
#include "tt/core/stack.hpp"
#include "tt/util/result.hpp"

namespace tt {

enum class ChannelState { opening, open, closed, failed };
std::string_view to_string(ChannelState s);

struct ChannelStats {
  std::uint64_t app_bytes_sent = 0;
  std::uint64_t app_bytes_received = 0;
  std::uint64_t integrity_failures = 0;
  bool silent = false;  // server side refused to authenticate the peer
  TransportStats transport;
};

// Duplex byte stream through an instantiated stack. Single owner; driven by
// the simulator's event loop.
class Channel {
 public:
  Channel(const ValidatedStack& stack, const LayerContext& ctx);
  ~Channel();
  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  Role role() const { return ctx_.role; }
  ChannelState state() const { return state_; }
  bool terminal() const { return state_ == ChannelState::closed || state_ == ChannelState::failed; }
  const std::optional<LayerError>& error() const { return error_; }
  const std::string& stack_name() const { return stack_name_; }
  netsim::Address peer() const { return ctx_.peer; }
  std::uint16_t peer_port() const { return ctx_.peer_port; }

  // Sends queue until the session is established.
  Result<void, LayerError> send(ByteView data);
  // Buffered bytes first; then the terminal error, if any; otherwise empty.
  Result<Bytes, LayerError> recv(std::size_t max = std::numeric_limits<std::size_t>::max());
  std::size_t available() const { return rx_.size(); }
  void close();

  // Client: begin the session. Server: the first packet from the peer.
  void start();
  void accept(const netsim::Packet& first);
  void receive(const netsim::Packet& p);

  // Nothing waiting anywhere in the stack and the transport fully acked.
  bool flushed() const;

  void set_on_readable(std::function<void(Channel&)> cb) { on_readable_ = std::move(cb); }
  void set_on_state(std::function<void(Channel&)> cb) { on_state_ = std::move(cb); }

  SideBand& control() { return sideband_; }
  ChannelStats stats() const;

 private:
  void wire_transport();
  void app_push(ByteView data);
  void push_lower(Bytes data);
  void pump_shaper();
  void on_segment(Bytes seg);
  void session_receive(ByteView data);
  void maybe_open();
  void arm_handshake_timer();
  void fail_with(LayerError e);
  void set_state(ChannelState s);
  void check_integrity();

  LayerContext ctx_;
  std::string stack_name_;
  Secrets secrets_;
  SideBand sideband_;
  ChannelState state_ = ChannelState::opening;
  std::optional<LayerError> error_;

  std::unique_ptr<SessionInitLayer> si_;
  std::unique_ptr<StreamLayer> enc_;
  std::vector<std::unique_ptr<StreamLayer>> middle_;  // top to bottom
  std::unique_ptr<ShapingLayer> shaper_;
  std::unique_ptr<TransportLayer> transport_;

  bool si_done_ = false;
  bool silent_ = false;
  Bytes pending_app_;
  Bytes rx_;
  bool shaper_scheduled_ = false;
  netsim::TimeUs last_unit_at_ = 0;
  bool sent_unit_ = false;
  std::uint64_t app_sent_ = 0;
  std::uint64_t app_received_ = 0;
  std::uint64_t integrity_seen_ = 0;
  std::shared_ptr<bool> alive_;

  std::function<void(Channel&)> on_readable_;
  std::function<void(Channel&)> on_state_;
};

}  // namespace tt
