#include "tt/transports/decoy.hpp"

#include "tt/util/crypto.hpp"

namespace tt::transports {

namespace {
constexpr std::size_t kPrefix = kDecoyNonceSize - kDecoyTagSize;

Bytes tag_for(ByteView key, ByteView prefix) {
  const auto d = crypto::hmac_sha256(key, "decoy tag", prefix);
  return Bytes(d.begin(), d.begin() + kDecoyTagSize);
}
}  // namespace

Bytes decoy_make_nonce(ByteView key, Rng& rng) {
  Bytes nonce = rng.bytes(kPrefix);
  append(nonce, tag_for(key, nonce));
  return nonce;
}

bool decoy_verify_nonce(ByteView key, ByteView nonce) {
  if (key.empty() || nonce.size() < kDecoyNonceSize) return false;
  return crypto::equal_ct(tag_for(key, nonce.first(kPrefix)), nonce.subspan(kPrefix, kDecoyTagSize));
}

bool decoy_router_check(ByteView key, const netsim::Packet& p) {
  return p.kind == netsim::PacketKind::handshake && decoy_verify_nonce(key, p.payload);
}

netsim::TagCheck decoy_tag_check(Bytes key) {
  return [key = std::move(key)](const netsim::Packet& p) { return decoy_router_check(key, p); };
}

Result<void, std::string> attach_decoy_router(netsim::Simulator& sim, Bytes key, netsim::Address proxy) {
  auto pos = sim.topology().deflector_position();
  if (!pos) return fail(std::string("topology has no deflecting router"));
  return sim.attach_deflector(*pos, decoy_tag_check(std::move(key)), proxy);
}

DecoyLayer::DecoyLayer(Role role, std::uint64_t seed, Bytes key)
    : role_(role), rng_(derive_seed(seed, "nonce")), key_(std::move(key)), dh_(role, derive_seed(seed, "dh")) {}

Bytes DecoyLayer::start() {
  if (role_ != Role::client) return {};
  Bytes msg = decoy_make_nonce(key_, rng_);
  append(msg, dh_.start());
  return msg;
}

SessionInitLayer::Step DecoyLayer::on_receive(ByteView data) {
  if (role_ == Role::client) return dh_.on_receive(data);
  std::size_t used = 0;
  if (nonce_buf_.size() < kDecoyNonceSize) {
    used = std::min(kDecoyNonceSize - nonce_buf_.size(), data.size());
    nonce_buf_.insert(nonce_buf_.end(), data.begin(), data.begin() + static_cast<std::ptrdiff_t>(used));
    if (nonce_buf_.size() < kDecoyNonceSize) return Step{used, {}, Status::in_progress, {}};
    if (!decoy_verify_nonce(key_, nonce_buf_)) return Step{used, {}, Status::silent, {}};
  }
  Step step = dh_.on_receive(data.subspan(used));
  step.consumed += used;
  return step;
}

}  // namespace tt::transports
