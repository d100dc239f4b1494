#include "tt/transports/uniform_dh.hpp"

#include "tt/util/crypto.hpp"

namespace tt::transports {

const Bytes& dh_prime() {
  static const Bytes p = *from_hex(
      "ffffffffffffffffc90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74"
      "020bbea63b139b22514a08798e3404ddef9519b3cd3a431b302b0a6df25f1437"
      "4fe1356d6d51c245e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7ed"
      "ee386bfb5a899fa5ae9f24117c4b1fe649286651ece45b3dc2007cb8a163bf05"
      "98da48361c55d39a69163fa8fd24cf5f83655d23dca3ad961c62f356208552bb"
      "9ed529077096966d670c354e4abc9804f1746c08ca18217c32905e462e36ce3b"
      "e39e772c180e86039b2783a2ec07a28fb5c55df06f4c52c9de2bcbf695581718"
      "3995497cea956ae515d2261898fa051015728e5a8aacaa68ffffffffffffffff");
  return p;
}

namespace {

Bytes generator() {
  Bytes g(kDhSize, 0);
  g.back() = 2;
  return g;
}

bool in_range(ByteView v) {
  if (v.size() != kDhSize) return false;
  Bytes two(kDhSize, 0);
  two.back() = 2;
  const Bytes p_minus_2 = crypto::sub_be(dh_prime(), two);
  return crypto::compare_be(v, two) >= 0 && crypto::compare_be(v, p_minus_2) <= 0;
}

}  // namespace

DhKeyPair dh_generate(Rng& rng) {
  DhKeyPair kp;
  kp.private_key = rng.bytes(32);
  kp.private_key.back() &= 0xfe;  // even, so p - X yields the same secret
  const Bytes x = crypto::mod_exp(generator(), kp.private_key, dh_prime());
  kp.wire = rng.coin() ? crypto::sub_be(dh_prime(), x) : x;
  return kp;
}

std::optional<Bytes> dh_shared(ByteView private_key, ByteView peer_wire) {
  if (!in_range(peer_wire)) return std::nullopt;
  return crypto::mod_exp(peer_wire, private_key, dh_prime());
}

SessionKeys derive_session_keys(ByteView secret, ByteView salt, std::string_view label, Role role) {
  const Bytes okm = crypto::hkdf(secret, salt, label, 4 * crypto::kAeadKeySize);
  auto part = [&](int i) {
    return Bytes(okm.begin() + i * crypto::kAeadKeySize, okm.begin() + (i + 1) * crypto::kAeadKeySize);
  };
  if (role == Role::client) return {part(0), part(1), part(2), part(3)};
  return {part(1), part(0), part(3), part(2)};
}

UniformDhLayer::UniformDhLayer(Role role, std::uint64_t seed) : role_(role), rng_(seed) {}

Bytes UniformDhLayer::start() {
  mine_ = dh_generate(rng_);
  return role_ == Role::client ? mine_.wire : Bytes{};
}

SessionInitLayer::Step UniformDhLayer::on_receive(ByteView data) {
  Step step;
  const std::size_t had = buf_.size();
  const std::size_t take = std::min(kDhSize - had, data.size());
  buf_.insert(buf_.end(), data.begin(), data.begin() + static_cast<std::ptrdiff_t>(take));
  step.consumed = take;
  if (buf_.size() < kDhSize) return step;

  if (role_ == Role::server) {
    mine_ = dh_generate(rng_);
    step.reply = mine_.wire;
  }
  auto shared = dh_shared(mine_.private_key, buf_);
  if (!shared) {
    step.status = Status::failed;
    step.detail = "peer public value out of range";
    step.reply.clear();
    return step;
  }
  Bytes salt;
  const ByteView client_pub = role_ == Role::client ? ByteView(mine_.wire) : ByteView(buf_);
  const ByteView server_pub = role_ == Role::client ? ByteView(buf_) : ByteView(mine_.wire);
  append(salt, client_pub);
  append(salt, server_pub);
  keys_ = derive_session_keys(*shared, salt, "uniform-dh session keys", role_);
  step.status = Status::established;
  return step;
}

}  // namespace tt::transports
