#include "tt/netsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace tt::netsim {

class Simulator::Deflector : public Middlebox {
 public:
  Deflector(TagCheck check, Address proxy) : check_(std::move(check)), proxy_(proxy) {}

  Disposition process(Packet& packet, HopContext& ctx) override {
    if (ctx.direction() != Direction::forward) return {};
    bool deflect = deflected_.count(packet.key) != 0;
    if (!deflect && packet.kind == PacketKind::handshake && check_(packet)) {
      deflected_.insert(packet.key);
      deflect = true;
    }
    if (deflect) {
      ctx.log(packet, "deflect");
      packet.deflected_from = packet.key.dst_addr;
      packet.key.dst_addr = proxy_;
    }
    return {};
  }

 private:
  TagCheck check_;
  Address proxy_;
  std::unordered_set<FlowKey, FlowKeyHash> deflected_;
};

TimeUs HopContext::now() const { return sim_.now_; }

std::size_t HopContext::hops_remaining() const {
  const std::size_t edge = sim_.topology_.edge_position();
  return dir_ == Direction::forward ? edge - position_ : position_;
}

double HopContext::outgoing_bandwidth() const {
  const std::size_t link = dir_ == Direction::forward ? position_ : position_ - 1;
  return sim_.topology_.links[link].bandwidth;
}

std::uint64_t HopContext::inject(Packet p, Direction dir) {
  return sim_.inject(std::move(p), position_, dir, action::kInject);
}

void HopContext::log(const Packet& p, std::string act) {
  sim_.log_.add(sim_.now_, position_, p.id, std::move(act), p.key);
}

void Node::bind(std::uint16_t port, Handler h) { handlers_[port] = std::move(h); }

void Node::unbind(std::uint16_t port) { handlers_.erase(port); }

std::uint16_t Node::ephemeral_port() {
  while (handlers_.count(next_ephemeral_) != 0) ++next_ephemeral_;
  return next_ephemeral_++;
}

std::uint64_t Node::send(Packet p) {
  p.send_time = sim_.now_;
  if (side_ == Side::client) return sim_.inject(std::move(p), 0, Direction::forward, action::kSend);
  return sim_.inject(std::move(p), sim_.topology_.edge_position(), Direction::reverse, action::kSend);
}

bool Node::deliver(const Packet& p) {
  auto it = handlers_.find(p.key.dst_port);
  // Copies: a handler may unbind itself.
  if (it != handlers_.end()) {
    Handler h = it->second;
    h(p);
    return true;
  }
  if (default_) {
    Handler h = default_;
    h(p);
    return true;
  }
  return false;
}

Simulator::Simulator(Topology topology, std::uint64_t seed)
    : topology_(std::move(topology)), seed_(seed), loss_rng_(tt::derive_seed(seed, "netsim.loss")) {
  if (auto err = topology_.validate()) throw std::invalid_argument("invalid topology: " + *err);
  busy_.assign(topology_.links.size(), {0, 0});
  boxes_.assign(topology_.edge_position() + 1, nullptr);
}

Simulator::~Simulator() = default;

Result<std::unique_ptr<Simulator>, std::string> Simulator::build(Topology topology, std::uint64_t seed) {
  if (auto err = topology.validate()) return fail("invalid topology: " + *err);
  return std::make_unique<Simulator>(std::move(topology), seed);
}

Node& Simulator::add_node(Side side, Address addr) {
  auto [it, inserted] = nodes_.try_emplace(addr, nullptr);
  if (!inserted) throw std::invalid_argument("address already in use: " + format_address(addr));
  it->second.reset(new Node(*this, side, addr));
  return *it->second;
}

Node* Simulator::node(Address addr) {
  auto it = nodes_.find(addr);
  return it == nodes_.end() ? nullptr : it->second.get();
}

Result<void, std::string> Simulator::attach_middlebox(std::size_t position, Middlebox* box) {
  if (position == 0 || position > topology_.hops.size()) return fail(std::string("no such hop"));
  if (topology_.hops[position - 1] != HopRole::censor)
    return fail(std::string("hop is not a censor position"));
  if (boxes_[position] != nullptr) return fail(std::string("hop occupied"));
  boxes_[position] = box;
  return {};
}

Result<void, std::string> Simulator::attach_deflector(std::size_t position, TagCheck check, Address proxy) {
  if (position == 0 || position > topology_.hops.size()) return fail(std::string("no such hop"));
  if (topology_.hops[position - 1] != HopRole::deflector)
    return fail(std::string("hop is not a deflecting router"));
  if (boxes_[position] != nullptr) return fail(std::string("hop occupied"));
  deflectors_.push_back(std::make_unique<Deflector>(std::move(check), proxy));
  boxes_[position] = deflectors_.back().get();
  return {};
}

void Simulator::detach(std::size_t position) {
  if (position < boxes_.size()) boxes_[position] = nullptr;
}

void Simulator::push(Event e) {
  queue_.push_back(std::move(e));
  std::push_heap(queue_.begin(), queue_.end(), Later{});
}

void Simulator::schedule_at(TimeUs t, std::function<void()> fn) {
  push(Event{std::max(t, now_), order_++, Timer{std::move(fn)}});
}

std::uint64_t Simulator::inject(Packet p, std::size_t position, Direction dir, const char* act) {
  p.id = next_packet_id_++;
  log_.add(now_, position, p.id, act, p.key);
  const std::uint64_t id = p.id;
  transmit(std::move(p), position, dir, now_);
  return id;
}

void Simulator::transmit(Packet p, std::size_t from, Direction dir, TimeUs ready) {
  const std::size_t link = dir == Direction::forward ? from : from - 1;
  const LinkSpec& spec = topology_.links[link];
  if (spec.loss > 0 && loss_rng_.uniform_real(0.0, 1.0) < spec.loss) {
    log_.add(now_, from, p.id, action::kDropLoss, p.key);
    return;
  }
  TimeUs& busy = busy_[link][dir == Direction::forward ? 0 : 1];
  const TimeUs start = std::max(ready, busy);
  // Whole microseconds; the slack keeps a near-infinite link at zero.
  const auto tx = static_cast<TimeUs>(
      std::ceil(static_cast<double>(p.wire_size()) * 1e6 / spec.bandwidth - 1e-6));
  busy = start + tx;
  const TimeUs at = start + tx + from_ms(spec.latency_ms);
  const std::size_t to = dir == Direction::forward ? from + 1 : from - 1;
  push(Event{at, order_++, Arrival{std::move(p), to, dir}});
}

void Simulator::arrive(Packet p, std::size_t position, Direction dir) {
  const std::size_t edge = topology_.edge_position();
  if (position == 0 || position == edge) {
    Node* dst = node(p.key.dst_addr);
    const Side want = position == 0 ? Side::client : Side::destination;
    if (dst == nullptr || dst->side() != want) {
      log_.add(now_, position, p.id, action::kDropUnroutable, p.key);
      return;
    }
    log_.add(now_, position, p.id, p.deflected_from ? action::kDeflected : action::kDeliver, p.key);
    if (observer_) observer_(p);
    dst->deliver(p);
    return;
  }
  TimeUs release = now_;
  if (Middlebox* box = boxes_[position]) {
    HopContext ctx(*this, position, dir);
    Disposition d = box->process(p, ctx);
    if (d.action == Disposition::Action::drop) {
      log_.add(now_, position, p.id, action::kDropCensor, p.key);
      return;
    }
    release = std::max(release, d.release_at);
  }
  if (--p.ttl <= 0) {
    log_.add(now_, position, p.id, action::kDropTtl, p.key);
    return;
  }
  if (release > now_) {
    auto shared = std::make_shared<Packet>(std::move(p));
    schedule_at(release, [this, shared, position, dir] {
      transmit(std::move(*shared), position, dir, now_);
    });
    return;
  }
  transmit(std::move(p), position, dir, now_);
}

bool Simulator::step() {
  if (queue_.empty()) return false;
  std::pop_heap(queue_.begin(), queue_.end(), Later{});
  Event e = std::move(queue_.back());
  queue_.pop_back();
  now_ = e.time;
  if (auto* a = std::get_if<Arrival>(&e.body)) {
    arrive(std::move(a->packet), a->position, a->dir);
  } else {
    std::get<Timer>(e.body).fn();
  }
  return true;
}

void Simulator::run_until(TimeUs t) {
  while (!queue_.empty() && queue_.front().time <= t) step();
  now_ = std::max(now_, t);
}

bool Simulator::run_while(const std::function<bool()>& keep_going, TimeUs deadline) {
  while (keep_going()) {
    if (queue_.empty() || queue_.front().time > deadline) {
      now_ = std::max(now_, deadline);
      return keep_going();
    }
    step();
  }
  return false;
}

void Simulator::run() {
  while (step()) {
  }
}

}  // namespace tt::netsim
