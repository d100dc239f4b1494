#include "tt/harness/prober.hpp"

#include "tt/core/endpoint.hpp"

namespace tt::harness {

std::vector<netsim::Address> StackProber::address_pool(std::size_t n) {
  std::vector<netsim::Address> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(kProberBase + static_cast<netsim::Address>(i));
  return out;
}

StackProber::StackProber(netsim::Simulator& sim, ValidatedStack stack, std::uint64_t seed, double timeout_s)
    : sim_(sim), stack_(std::move(stack)), seed_(seed), timeout_(netsim::from_seconds(timeout_s)) {}

void StackProber::probe(const censor::ProbeRequest& req, Done done) {
  const std::size_t index = records_.size();
  records_.push_back({req, kProberBase + static_cast<netsim::Address>(index + 1)});
  std::weak_ptr<bool> alive = alive_;
  sim_.schedule_in(0, [this, alive, index, done] {
    if (alive.expired()) return;
    Record& rec = records_[index];
    netsim::Node* node = sim_.node(rec.source);
    if (node == nullptr) node = &sim_.add_node(netsim::Side::client, rec.source);
    ClientConfig cfg;
    cfg.server = rec.request.addr;
    cfg.seed = derive_seed(seed_, index);
    auto ch = connect_channel(stack_, *node, cfg);
    // Something for a handshake-free server to answer.
    Rng rng(cfg.seed);
    (void)ch->send(rng.bytes(64));
    channels_[index] = std::move(ch);
    sim_.schedule_in(timeout_, [this, alive, index, done] {
      if (!alive.expired()) finish(index, done);
    });
  });
}

void StackProber::finish(std::size_t index, Done done) {
  Record& rec = records_[index];
  Channel& ch = *channels_.at(index);
  const ChannelStats st = ch.stats();
  rec.server_bytes = st.transport.payload_bytes_received;
  rec.handshake_done = ch.state() == ChannelState::open || st.app_bytes_received > 0;
  rec.confirmed = rec.handshake_done && rec.server_bytes > 0;
  ch.close();
  done(rec.confirmed, sim_.now());
}

}  // namespace tt::harness
