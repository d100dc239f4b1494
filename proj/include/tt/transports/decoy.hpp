#pragma once

#include "tt/core/layer.hpp"
#include "tt/netsim/simulator.hpp"
#include "tt/transports/uniform_dh.hpp"

namespace tt::transports {

constexpr std::size_t kDecoyNonceSize = 32;
constexpr std::size_t kDecoyTagSize = 8;

// 24 random bytes followed by an 8-byte MAC over them.
Bytes decoy_make_nonce(ByteView key, Rng& rng);
bool decoy_verify_nonce(ByteView key, ByteView nonce);
// The router inspects the leading nonce of a connection's first packet.
bool decoy_router_check(ByteView key, const netsim::Packet& p);
netsim::TagCheck decoy_tag_check(Bytes key);

// Installs a keyed deflecting router at the topology's deflector hop.
Result<void, std::string> attach_decoy_router(netsim::Simulator& sim, Bytes key, netsim::Address proxy);

// Uniform DH whose first flight is prefixed with a tagged nonce. The covert
// proxy completes the exchange only when the tag verifies.
class DecoyLayer : public SessionInitLayer {
 public:
  DecoyLayer(Role role, std::uint64_t seed, Bytes key);

  Bytes start() override;
  Step on_receive(ByteView data) override;
  SessionKeys keys() const override { return dh_.keys(); }

 private:
  Role role_;
  Rng rng_;
  Bytes key_;
  Bytes nonce_buf_;
  UniformDhLayer dh_;
};

}  // namespace tt::transports
