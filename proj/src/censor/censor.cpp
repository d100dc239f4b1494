#include "tt/censor/censor.hpp"

namespace tt::censor {

using netsim::Direction;
using netsim::Disposition;

Censor::Censor(CensorPolicy policy) : inspector_(std::move(policy)) {}

Censor::~Censor() { *alive_ = false; }

Disposition Censor::process(netsim::Packet& p, netsim::HopContext& ctx) {
  const PacketContext pc{ctx.now(), ctx.hops_remaining(), ctx.outgoing_bandwidth()};
  Verdict v = inspector_.inspect(p, pc);
  Disposition d;
  if (v.type != Verdict::Type::allow) ctx.log(p, "censor-" + std::string(to_string(v.type)) + ":" + v.node);

  switch (v.type) {
    case Verdict::Type::allow:
    case Verdict::Type::flag:
      break;
    case Verdict::Type::drop:
      d.action = Disposition::Action::drop;
      break;
    case Verdict::Type::inject_rst: {
      const Direction back = ctx.direction() == Direction::forward ? Direction::reverse : Direction::forward;
      netsim::Packet to_receiver;
      to_receiver.key = p.key;
      to_receiver.kind = netsim::PacketKind::rst;
      to_receiver.seq = p.seq + static_cast<std::uint32_t>(p.payload.size());
      netsim::Packet to_sender;
      to_sender.key = p.key.reversed();
      to_sender.kind = netsim::PacketKind::rst;
      to_sender.seq = p.ack;
      ctx.inject(std::move(to_receiver), ctx.direction());
      ctx.inject(std::move(to_sender), back);
      injected_rsts_ += 2;
      break;
    }
    case Verdict::Type::tamper:
      p.payload = std::move(v.replacement);
      break;
    case Verdict::Type::throttle:
      d.release_at = v.release_at;
      break;
  }

  if (prober_) {
    for (auto& req : inspector_.take_probe_requests()) {
      std::weak_ptr<bool> alive = alive_;
      prober_->probe(req, [this, alive, req](bool confirmed, netsim::TimeUs when) {
        if (alive.expired()) return;
        inspector_.probe_finished(req, confirmed, when);
      });
    }
  }
  return d;
}

}  // namespace tt::censor
