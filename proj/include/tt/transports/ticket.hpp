#pragma once

#include <optional>
#include <unordered_set>

#include "tt/core/layer.hpp"
#include "tt/util/rng.hpp"

namespace tt::transports {

constexpr std::size_t kTicketSize = 32;
constexpr std::size_t kTicketSecretSize = 32;

enum class TicketCheck { valid, malformed, bad_mac, expired, replayed };
std::string_view to_string(TicketCheck c);

// Issues and redeems 32-byte tickets: key-id(8) | masked expiry(8) | mac(16).
// Each key-id can be redeemed once for the lifetime of the authority.
class TicketAuthority {
 public:
  TicketAuthority(Bytes master_key, std::uint64_t lifetime_s);

  TicketGrant issue(netsim::TimeUs now);
  TicketCheck check(ByteView ticket, netsim::TimeUs now) const;
  // Session secret bound to a well-formed ticket, valid or not.
  Bytes secret_for(ByteView ticket) const;
  // Consumes the key-id; returns the session secret if the ticket was valid.
  std::optional<Bytes> redeem(ByteView ticket, netsim::TimeUs now);
  std::size_t redeemed() const { return used_.size(); }
  std::uint64_t lifetime_s() const { return lifetime_; }

 private:
  Bytes mac(ByteView key_id, std::uint64_t expiry) const;
  std::uint64_t pad(ByteView key_id) const;

  Bytes master_;
  std::uint64_t lifetime_;
  Rng rng_;
  std::unordered_set<std::uint64_t> used_;
};

// The authority shared by every connection of one server.
TicketAuthority& ticket_authority(ServerState& state, const Bytes& master_key, std::uint64_t lifetime_s);

// Sideband key under which the client stores ticket || secret for next time.
inline constexpr const char* kNextTicketKey = "SI.next_ticket";

// Ticket redemption with random padding. The responder stays silent unless
// the ticket is valid, fresh and unused, so scanners learn nothing.
class TicketLayer : public SessionInitLayer {
 public:
  struct Options {
    std::size_t max_padding = 256;
    std::uint64_t lifetime_s = 3600;
  };

  TicketLayer(const LayerContext& ctx, Options opts);

  Bytes start() override;
  Step on_receive(ByteView data) override;
  SessionKeys keys() const override { return keys_; }

 private:
  Step client_receive(ByteView data);
  Step server_receive(ByteView data);

  LayerContext ctx_;
  Options opts_;
  Rng rng_;
  Bytes ticket_;
  Bytes secret_;
  Bytes client_nonce_;
  Bytes buf_;
  bool ticket_checked_ = false;
  SessionKeys keys_;
};

}  // namespace tt::transports
