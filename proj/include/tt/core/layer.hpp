#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>

#include "tt/core/error.hpp"
#include "tt/netsim/simulator.hpp"
#include "tt/util/bytes.hpp"
#include "tt/util/result.hpp"

namespace tt {

// The six layers of the evaluation stack, top to bottom.
enum class LayerKind {
  session_init,
  encryption,
  multiplexing,
  content_obfuscation,
  timing_length,
  transport,
};

inline constexpr LayerKind kAllLayerKinds[] = {
    LayerKind::session_init,        LayerKind::encryption,    LayerKind::multiplexing,
    LayerKind::content_obfuscation, LayerKind::timing_length, LayerKind::transport,
};

// SessionInit and Encryption share rank 0.
constexpr int rank(LayerKind k) {
  switch (k) {
    case LayerKind::session_init:
    case LayerKind::encryption: return 0;
    case LayerKind::multiplexing: return 1;
    case LayerKind::content_obfuscation: return 2;
    case LayerKind::timing_length: return 3;
    case LayerKind::transport: return 4;
  }
  return -1;
}

std::string_view short_name(LayerKind k);  // SI, ENC, MUX, OBF, TIMLEN, TRN
std::string_view long_name(LayerKind k);   // SessionInit, Encryption, ...
std::optional<LayerKind> parse_layer_kind(std::string_view s);

enum class Role { client, server };
std::string_view to_string(Role r);

using Params = std::map<std::string, std::string>;

struct LayerSpec {
  LayerKind kind = LayerKind::transport;
  std::string impl;
  Params params;

  std::string str() const;  // kind:impl{k=v,...}
  bool operator==(const LayerSpec&) const = default;
};

// Directional keys handed from SessionInit to Encryption.
struct SessionKeys {
  Bytes send_key;
  Bytes recv_key;
  Bytes send_length_key;
  Bytes recv_length_key;
};

// Keys used by Encryption when no SessionInit layer is present. They are
// fixed by the protocol and therefore known to everyone, censors included.
SessionKeys static_session_keys(Role role);

struct TicketGrant {
  Bytes ticket;  // 32-byte opaque blob
  Bytes secret;  // 32-byte session secret bound to the ticket
};

// Material distributed out of band, never derivable from the wire.
struct Secrets {
  std::optional<TicketGrant> ticket;  // client
  Bytes ticket_master_key;            // server
  Bytes deflection_key;               // client and covert proxy
};

// Per-channel control records that bypass the data path.
class SideBand {
 public:
  void put(const std::string& key, Bytes value) { records_[key] = std::move(value); }
  const Bytes* get(const std::string& key) const {
    auto it = records_.find(key);
    return it == records_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, Bytes>& records() const { return records_; }

 private:
  std::map<std::string, Bytes> records_;
};

// Objects shared by every connection a server accepts (ticket replay
// cache and the like), keyed by name.
class ServerState {
 public:
  template <class T, class Make>
  T& shared(const std::string& key, Make&& make) {
    auto it = objects_.find(key);
    if (it == objects_.end()) it = objects_.emplace(key, std::shared_ptr<T>(make())).first;
    return *std::static_pointer_cast<T>(it->second);
  }

 private:
  std::unordered_map<std::string, std::shared_ptr<void>> objects_;
};

struct ChannelTimeouts {
  netsim::TimeUs handshake = netsim::from_seconds(10);
  netsim::TimeUs send = netsim::from_seconds(30);
};

struct LayerContext {
  Role role = Role::client;
  netsim::Simulator* sim = nullptr;
  netsim::Node* node = nullptr;
  netsim::Address peer = 0;       // remote address
  std::uint16_t peer_port = 0;    // server side: the client's port
  std::uint64_t seed = 0;
  const Secrets* secrets = nullptr;
  ServerState* server_state = nullptr;
  SideBand* sideband = nullptr;
  ChannelTimeouts timeouts;
};

class SessionInitLayer {
 public:
  enum class Status { in_progress, established, failed, silent };
  struct Step {
    std::size_t consumed = 0;  // bytes of the input that belonged to the handshake
    Bytes reply;               // bytes to send to the peer
    Status status = Status::in_progress;
    std::string detail;
  };

  virtual ~SessionInitLayer() = default;
  // First flight; empty for the responder.
  virtual Bytes start() = 0;
  virtual Step on_receive(ByteView data) = 0;
  // Valid once established.
  virtual SessionKeys keys() const = 0;
};

// Stateful byte-stream transform (Encryption, Multiplexing, ContentObfuscation).
class StreamLayer {
 public:
  virtual ~StreamLayer() = default;
  virtual void install_keys(const SessionKeys&) {}
  virtual Bytes encode(ByteView data) = 0;
  // Buffers incomplete input; returns whatever decodes completely.
  virtual Result<Bytes, LayerError> decode(ByteView data) = 0;
  // Units discarded because they failed an integrity check.
  virtual std::uint64_t integrity_failures() const { return 0; }
  // Input buffered but not yet decodable.
  virtual std::size_t buffered() const { return 0; }
};

class ShapingLayer {
 public:
  virtual ~ShapingLayer() = default;
  virtual void enqueue(ByteView data) = 0;
  virtual bool pending() const = 0;
  // Gap to wait after the previous unit before releasing the next one.
  virtual netsim::TimeUs next_gap() = 0;
  // Builds one packet payload from queued data, padding as needed.
  virtual Bytes build_unit() = 0;
  virtual Result<Bytes, LayerError> deshape(ByteView unit) = 0;
  virtual std::size_t queued() const = 0;
};

struct TransportStats {
  std::uint64_t packets_sent = 0;
  std::uint64_t payload_bytes_sent = 0;
  std::uint64_t payload_bytes_received = 0;
  std::uint64_t retransmissions = 0;
};

class TransportLayer {
 public:
  struct Callbacks {
    std::function<void(Bytes)> segment;
    std::function<void()> established;
    std::function<void(LayerError)> error;
  };

  virtual ~TransportLayer() = default;
  virtual void set_callbacks(Callbacks cb) = 0;
  virtual void connect() = 0;
  virtual void accept(const netsim::Packet& first) = 0;
  virtual void receive(const netsim::Packet& p) = 0;
  // One segment per packet; boundaries are preserved end to end.
  virtual void send_segment(Bytes segment) = 0;
  virtual void send_stream(ByteView data) = 0;
  virtual bool established() const = 0;
  virtual bool heard_from_peer() const = 0;
  // Nothing queued and everything acknowledged.
  virtual bool idle() const = 0;
  virtual void close() = 0;
  virtual TransportStats stats() const = 0;
};

using LayerInstance = std::variant<std::unique_ptr<SessionInitLayer>, std::unique_ptr<StreamLayer>,
                                   std::unique_ptr<ShapingLayer>, std::unique_ptr<TransportLayer>>;

}  // namespace tt
