#pragma once

#include <optional>

#include "tt/core/layer.hpp"
#include "tt/util/rng.hpp"

namespace tt::transports {

// 2048-bit MODP group 14 (RFC 3526), generator 2.
const Bytes& dh_prime();
constexpr std::size_t kDhSize = 256;

struct DhKeyPair {
  Bytes private_key;  // 32 bytes, even
  Bytes wire;         // public value, either X or p - X, chosen at random
};

DhKeyPair dh_generate(Rng& rng);
// Shared secret, or nullopt when the peer's value is not in [2, p-2].
std::optional<Bytes> dh_shared(ByteView private_key, ByteView peer_wire);

// Directional record keys from a shared secret; `salt` binds the transcript.
SessionKeys derive_session_keys(ByteView secret, ByteView salt, std::string_view label, Role role);

// Anonymous DH whose messages are indistinguishable from random strings.
// The responder completes the exchange with anyone who sends 256 bytes.
class UniformDhLayer : public SessionInitLayer {
 public:
  UniformDhLayer(Role role, std::uint64_t seed);

  Bytes start() override;
  Step on_receive(ByteView data) override;
  SessionKeys keys() const override { return keys_; }

 private:
  Role role_;
  Rng rng_;
  DhKeyPair mine_;
  Bytes buf_;
  SessionKeys keys_;
};

}  // namespace tt::transports
