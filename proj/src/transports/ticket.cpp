#include "tt/transports/ticket.hpp"

#include "tt/transports/uniform_dh.hpp"
#include "tt/util/crypto.hpp"

namespace tt::transports {

namespace {

constexpr std::size_t kNonceSize = 16;
constexpr std::size_t kMarkSize = 16;
constexpr std::size_t kMacSize = 16;
constexpr std::size_t kNextSize = kTicketSize + kTicketSecretSize;

Bytes truncated(const crypto::Digest& d, std::size_t n) { return Bytes(d.begin(), d.begin() + n); }

Bytes concat(ByteView a, ByteView b) {
  Bytes out(a.begin(), a.end());
  append(out, b);
  return out;
}

std::optional<std::size_t> find_from(ByteView hay, ByteView needle, std::size_t from) {
  if (hay.size() < from) return std::nullopt;
  auto pos = find(hay.subspan(from), needle);
  if (!pos) return std::nullopt;
  return from + *pos;
}

std::uint64_t seconds(netsim::TimeUs t) { return t / netsim::kMicrosPerSecond; }

}  // namespace

std::string_view to_string(TicketCheck c) {
  switch (c) {
    case TicketCheck::valid: return "valid";
    case TicketCheck::malformed: return "malformed";
    case TicketCheck::bad_mac: return "bad-mac";
    case TicketCheck::expired: return "expired";
    case TicketCheck::replayed: return "replayed";
  }
  return "?";
}

TicketAuthority::TicketAuthority(Bytes master_key, std::uint64_t lifetime_s)
    : master_(std::move(master_key)), lifetime_(lifetime_s), rng_(get_u64(crypto::sha256(master_))) {}

Bytes TicketAuthority::mac(ByteView key_id, std::uint64_t expiry) const {
  Bytes msg(key_id.begin(), key_id.end());
  put_u64(msg, expiry);
  return truncated(crypto::hmac_sha256(master_, "ticket mac", msg), 16);
}

std::uint64_t TicketAuthority::pad(ByteView key_id) const {
  return get_u64(crypto::hmac_sha256(master_, "ticket expiry pad", key_id));
}

TicketGrant TicketAuthority::issue(netsim::TimeUs now) {
  const Bytes key_id = rng_.bytes(8);
  const std::uint64_t expiry = seconds(now) + lifetime_;
  Bytes ticket = key_id;
  put_u64(ticket, expiry ^ pad(key_id));
  append(ticket, mac(key_id, expiry));
  return {ticket, secret_for(ticket)};
}

Bytes TicketAuthority::secret_for(ByteView ticket) const {
  const auto d = crypto::hmac_sha256(master_, "ticket secret", ticket.first(8));
  return Bytes(d.begin(), d.end());
}

TicketCheck TicketAuthority::check(ByteView ticket, netsim::TimeUs now) const {
  if (ticket.size() != kTicketSize) return TicketCheck::malformed;
  const ByteView key_id = ticket.first(8);
  const std::uint64_t expiry = get_u64(ticket.subspan(8, 8)) ^ pad(key_id);
  if (!crypto::equal_ct(mac(key_id, expiry), ticket.subspan(16, 16))) return TicketCheck::bad_mac;
  if (now >= expiry * netsim::kMicrosPerSecond) return TicketCheck::expired;
  if (used_.count(get_u64(key_id)) != 0) return TicketCheck::replayed;
  return TicketCheck::valid;
}

std::optional<Bytes> TicketAuthority::redeem(ByteView ticket, netsim::TimeUs now) {
  if (check(ticket, now) != TicketCheck::valid) return std::nullopt;
  used_.insert(get_u64(ticket.first(8)));
  return secret_for(ticket);
}

TicketAuthority& ticket_authority(ServerState& state, const Bytes& master_key, std::uint64_t lifetime_s) {
  return state.shared<TicketAuthority>("ticket-authority",
                                       [&] { return new TicketAuthority(master_key, lifetime_s); });
}

TicketLayer::TicketLayer(const LayerContext& ctx, Options opts) : ctx_(ctx), opts_(opts), rng_(ctx.seed) {}

Bytes TicketLayer::start() {
  if (ctx_.role != Role::client) return {};
  if (ctx_.secrets != nullptr && ctx_.secrets->ticket) {
    ticket_ = ctx_.secrets->ticket->ticket;
    secret_ = ctx_.secrets->ticket->secret;
  } else {
    // No ticket: behave like a prober that has to guess one.
    ticket_ = rng_.bytes(kTicketSize);
    secret_ = rng_.bytes(kTicketSecretSize);
  }
  client_nonce_ = rng_.bytes(kNonceSize);
  Bytes msg = ticket_;
  append(msg, client_nonce_);
  append(msg, rng_.bytes(rng_.uniform(0, opts_.max_padding)));
  append(msg, truncated(crypto::hmac_sha256(secret_, "client mark", concat(ticket_, client_nonce_)), kMarkSize));
  append(msg, truncated(crypto::hmac_sha256(secret_, "client mac", msg), kMacSize));
  return msg;
}

SessionInitLayer::Step TicketLayer::on_receive(ByteView data) {
  return ctx_.role == Role::client ? client_receive(data) : server_receive(data);
}

SessionInitLayer::Step TicketLayer::server_receive(ByteView data) {
  Step step;
  const std::size_t had = buf_.size();
  append(buf_, data);
  step.consumed = data.size();
  if (buf_.size() < kTicketSize) return step;

  TicketAuthority& authority =
      ticket_authority(*ctx_.server_state, ctx_.secrets->ticket_master_key, opts_.lifetime_s);
  const ByteView ticket = ByteView(buf_).first(kTicketSize);
  if (!ticket_checked_) {
    if (authority.check(ticket, ctx_.sim->now()) != TicketCheck::valid) {
      step.status = Status::silent;
      return step;
    }
    ticket_checked_ = true;
    secret_ = authority.secret_for(ticket);
  }
  if (buf_.size() < kTicketSize + kNonceSize) return step;
  client_nonce_.assign(buf_.begin() + kTicketSize, buf_.begin() + kTicketSize + kNonceSize);
  const Bytes mark =
      truncated(crypto::hmac_sha256(secret_, "client mark", concat(ticket, client_nonce_)), kMarkSize);
  const std::size_t limit = kTicketSize + kNonceSize + opts_.max_padding + kMarkSize + kMacSize;
  auto at = find_from(ByteView(buf_).first(std::min(buf_.size(), limit)), mark, kTicketSize + kNonceSize);
  if (!at || buf_.size() < *at + kMarkSize + kMacSize) {
    if (buf_.size() >= limit) step.status = Status::silent;
    return step;
  }
  const std::size_t mac_at = *at + kMarkSize;
  const Bytes expect = truncated(crypto::hmac_sha256(secret_, "client mac", ByteView(buf_).first(mac_at)), kMacSize);
  if (!crypto::equal_ct(expect, ByteView(buf_).subspan(mac_at, kMacSize)) ||
      !authority.redeem(ticket, ctx_.sim->now())) {
    step.status = Status::silent;
    return step;
  }
  step.consumed = mac_at + kMacSize - had;

  const Bytes server_nonce = rng_.bytes(kNonceSize);
  const Bytes nonces = concat(client_nonce_, server_nonce);
  const TicketGrant next = authority.issue(ctx_.sim->now());
  Bytes sealed_next = concat(next.ticket, next.secret);
  const Bytes stream = crypto::hkdf(secret_, nonces, "next ticket", kNextSize);
  for (std::size_t i = 0; i < kNextSize; ++i) sealed_next[i] ^= stream[i];

  Bytes reply = server_nonce;
  append(reply, rng_.bytes(rng_.uniform(0, opts_.max_padding)));
  append(reply, truncated(crypto::hmac_sha256(secret_, "server mark", nonces), kMarkSize));
  append(reply, sealed_next);
  append(reply, truncated(crypto::hmac_sha256(secret_, "server mac", reply), kMacSize));
  step.reply = std::move(reply);
  keys_ = derive_session_keys(secret_, nonces, "ticket session keys", Role::server);
  step.status = Status::established;
  buf_.clear();
  return step;
}

SessionInitLayer::Step TicketLayer::client_receive(ByteView data) {
  Step step;
  const std::size_t had = buf_.size();
  append(buf_, data);
  step.consumed = data.size();
  if (buf_.size() < kNonceSize) return step;
  const Bytes nonces = concat(client_nonce_, ByteView(buf_).first(kNonceSize));
  const Bytes mark = truncated(crypto::hmac_sha256(secret_, "server mark", nonces), kMarkSize);
  const std::size_t limit = kNonceSize + opts_.max_padding + kMarkSize + kNextSize + kMacSize;
  auto at = find_from(ByteView(buf_).first(std::min(buf_.size(), limit)), mark, kNonceSize);
  if (!at || buf_.size() < *at + kMarkSize + kNextSize + kMacSize) {
    if (buf_.size() >= limit) {
      step.status = Status::failed;
      step.detail = "server reply carries no valid mark";
    }
    return step;
  }
  const std::size_t next_at = *at + kMarkSize;
  const std::size_t mac_at = next_at + kNextSize;
  const Bytes expect = truncated(crypto::hmac_sha256(secret_, "server mac", ByteView(buf_).first(mac_at)), kMacSize);
  if (!crypto::equal_ct(expect, ByteView(buf_).subspan(mac_at, kMacSize))) {
    step.status = Status::failed;
    step.detail = "server reply failed authentication";
    return step;
  }
  Bytes next(buf_.begin() + static_cast<std::ptrdiff_t>(next_at), buf_.begin() + static_cast<std::ptrdiff_t>(mac_at));
  const Bytes stream = crypto::hkdf(secret_, nonces, "next ticket", kNextSize);
  for (std::size_t i = 0; i < kNextSize; ++i) next[i] ^= stream[i];
  if (ctx_.sideband != nullptr) ctx_.sideband->put(kNextTicketKey, next);
  keys_ = derive_session_keys(secret_, nonces, "ticket session keys", Role::client);
  step.consumed = mac_at + kMacSize - had;
  step.status = Status::established;
  buf_.clear();
  return step;
}

}  // namespace tt::transports
