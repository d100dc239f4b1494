#pragma once

#include <deque>
#include <map>
#include <memory>

#include "tt/core/layer.hpp"

namespace tt::transports {

// Destination ports, either one fixed port or a keyed pseudo-random walk
// over a port set that both ends can predict.
struct PortPolicy {
  std::uint16_t fixed = 9443;
  std::vector<std::uint16_t> hop_ports;
  Bytes hop_key;

  static PortPolicy fixed_port(std::uint16_t port);
  static PortPolicy hopping(std::uint64_t seed, std::uint16_t lo, std::uint16_t hi);

  bool is_hopping() const { return !hop_ports.empty(); }
  std::uint16_t port_for(std::uint64_t packet_index) const;
  std::vector<std::uint16_t> listen_ports() const;
};

std::vector<std::uint16_t> hop_sequence(const PortPolicy& policy, std::size_t n);

struct SimTransportOptions {
  PortPolicy ports;
  std::size_t mss = netsim::kMtu;
  std::size_t window = 64;  // segments in flight
  int ttl = netsim::kDefaultTtl;
  bool ignore_rst = false;
  // Follow the opening packet with a reset that expires before the server.
  bool ttl_rst = false;
  int ttl_rst_value = 2;
  netsim::TimeUs rto_initial = netsim::from_seconds(1);
  netsim::TimeUs rto_min = netsim::from_ms(200);
  netsim::TimeUs rto_max = netsim::from_seconds(8);
};

// Reliable, ordered delivery of segments over the simulator. Sequence
// numbers are byte offsets, acknowledgements are cumulative, and every
// unacknowledged segment is resent when the retransmission timer fires.
class SimTransport : public TransportLayer {
 public:
  SimTransport(const LayerContext& ctx, SimTransportOptions opts);
  ~SimTransport() override;

  void set_callbacks(Callbacks cb) override { cb_ = std::move(cb); }
  void connect() override;
  void accept(const netsim::Packet& first) override;
  void receive(const netsim::Packet& p) override;
  void send_segment(Bytes segment) override;
  void send_stream(ByteView data) override;
  bool established() const override { return established_; }
  bool heard_from_peer() const override { return heard_; }
  bool idle() const override { return queue_.empty() && unacked_.empty() && !syn_unacked_; }
  void close() override;
  TransportStats stats() const override { return stats_; }

  std::uint16_t local_port() const { return local_port_; }

 private:
  struct Segment {
    std::uint32_t seq = 0;
    Bytes data;
    netsim::PacketKind kind = netsim::PacketKind::data;
    netsim::TimeUs first_sent = 0;
    bool retransmitted = false;
  };
  struct Pending {
    Bytes data;
    bool stream = false;
  };

  void kick();
  void try_send();
  void transmit(Segment& s);
  void send_empty(netsim::PacketKind kind, int ttl);
  netsim::FlowKey next_key();
  void on_ack(std::uint32_t ack);
  void arm_rto();
  void on_rto();
  void raise(LayerError e);

  LayerContext ctx_;
  SimTransportOptions opts_;
  Callbacks cb_;
  bool client_;
  bool started_ = false;
  bool established_ = false;
  bool heard_ = false;
  bool closed_ = false;
  bool bound_ = false;

  netsim::Address local_addr_ = 0;
  std::uint16_t local_port_ = 0;
  std::uint64_t packet_index_ = 0;

  std::deque<Pending> queue_;
  std::deque<Segment> unacked_;
  std::uint32_t snd_nxt_ = 0;
  std::uint32_t rcv_next_ = 0;
  std::map<std::uint32_t, Bytes> out_of_order_;

  bool syn_unacked_ = false;
  netsim::TimeUs syn_first_sent_ = 0;

  netsim::TimeUs rto_;
  double srtt_ = 0;
  double rttvar_ = 0;
  bool have_rtt_ = false;
  bool rto_armed_ = false;
  std::uint64_t rto_gen_ = 0;

  TransportStats stats_;
  std::shared_ptr<bool> alive_;
};

}  // namespace tt::transports
