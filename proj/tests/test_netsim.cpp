#include <gtest/gtest.h>

#include <map>

#include "support.hpp"
#include "tt/transports/decoy.hpp"

namespace tt::netsim {
namespace {

constexpr Address kA = 0x0A000002;
constexpr Address kB = 0xC6336407;
constexpr Address kOvert = 0xCB00710A;

LinkSpec fast_link(double latency_ms, double loss = 0) {
  LinkSpec l;
  l.latency_ms = latency_ms;
  l.loss = loss;
  l.bandwidth = 1e15;
  return l;
}

Packet packet(Address src, Address dst, std::size_t n = 10, int ttl = kDefaultTtl) {
  Packet p;
  p.key = {src, 1000, dst, 80};
  p.payload = Bytes(n, 'x');
  p.ttl = ttl;
  return p;
}

struct Counter : Middlebox {
  int seen = 0;
  bool drop = false;
  Disposition process(Packet&, HopContext&) override {
    ++seen;
    Disposition d;
    if (drop) d.action = Disposition::Action::drop;
    return d;
  }
};

TEST(Topology, Validation) {
  EXPECT_FALSE(Topology::direct().validate());
  EXPECT_FALSE(Topology::canonical().validate());
  EXPECT_FALSE(Topology::canonical(true).validate());
  EXPECT_EQ(*Topology::canonical().censor_position(), 2u);
  EXPECT_EQ(*Topology::canonical(true).deflector_position(), 3u);

  Topology two{{HopRole::censor, HopRole::censor}, {{}, {}, {}}};
  EXPECT_TRUE(two.validate());
  EXPECT_FALSE(Simulator::build(two, 1));
  EXPECT_THROW(Simulator(two, 1), std::invalid_argument);

  Topology early{{HopRole::deflector, HopRole::censor}, {{}, {}, {}}};
  EXPECT_TRUE(early.validate());
  Topology links{{HopRole::router}, {{}}};
  EXPECT_TRUE(links.validate());
  Topology lossy = Topology::direct(fast_link(1, 1.5));
  EXPECT_TRUE(lossy.validate());
}

TEST(Simulator, LatencyOnALosslessLink) {
  Simulator sim(Topology::direct(fast_link(10)), 1);
  auto& a = sim.add_node(Side::client, kA);
  auto& b = sim.add_node(Side::destination, kB);
  std::vector<TimeUs> at;
  b.bind(80, [&](const Packet&) { at.push_back(sim.now()); });
  (void)a;
  a.send(packet(kA, kB));
  sim.run();
  ASSERT_EQ(at.size(), 1u);
  EXPECT_EQ(at[0], from_ms(10));
}

TEST(Simulator, BandwidthSerialisesPackets) {
  LinkSpec l;
  l.latency_ms = 0;
  l.bandwidth = 1000;  // bytes per second
  Simulator sim(Topology::direct(l), 1);
  auto& a = sim.add_node(Side::client, kA);
  auto& b = sim.add_node(Side::destination, kB);
  std::vector<TimeUs> at;
  b.bind(80, [&](const Packet&) { at.push_back(sim.now()); });
  for (int i = 0; i < 3; ++i) a.send(packet(kA, kB, 60));  // 100 wire bytes each
  sim.run();
  ASSERT_EQ(at.size(), 3u);
  EXPECT_EQ(at[0], from_ms(100));
  EXPECT_EQ(at[1], from_ms(200));
  EXPECT_EQ(at[2], from_ms(300));
}

TEST(Simulator, LowTtlReachesCensorButNotServer) {
  Topology t{{HopRole::censor}, {fast_link(1), fast_link(1)}};
  Simulator sim(t, 1);
  Counter box;
  ASSERT_TRUE(sim.attach_middlebox(1, &box));
  auto& a = sim.add_node(Side::client, kA);
  auto& b = sim.add_node(Side::destination, kB);
  int delivered = 0;
  b.bind(80, [&](const Packet&) { ++delivered; });
  a.send(packet(kA, kB, 10, 1));
  sim.run();
  EXPECT_EQ(box.seen, 1);
  EXPECT_EQ(delivered, 0);
  bool ttl_drop = false;
  for (const auto& r : sim.log().records()) ttl_drop |= r.action == action::kDropTtl;
  EXPECT_TRUE(ttl_drop);
}

TEST(Simulator, CanonicalTopologyTtlTwo) {
  Simulator sim(Topology::canonical(), 1);
  Counter box;
  ASSERT_TRUE(sim.attach_middlebox(*sim.topology().censor_position(), &box));
  auto& a = sim.add_node(Side::client, kA);
  auto& b = sim.add_node(Side::destination, kB);
  int delivered = 0;
  b.bind(80, [&](const Packet&) { ++delivered; });
  a.send(packet(kA, kB, 10, 2));
  a.send(packet(kA, kB, 10, 64));
  sim.run();
  EXPECT_EQ(box.seen, 2);
  EXPECT_EQ(delivered, 1);
}

TEST(Simulator, TotalLossDropsEverything) {
  Simulator sim(Topology::direct(fast_link(1, 1.0)), 1);
  auto& a = sim.add_node(Side::client, kA);
  auto& b = sim.add_node(Side::destination, kB);
  int delivered = 0;
  b.bind(80, [&](const Packet&) { ++delivered; });
  for (int i = 0; i < 50; ++i) a.send(packet(kA, kB));
  sim.run();
  EXPECT_EQ(delivered, 0);
  int dropped = 0;
  for (const auto& r : sim.log().records()) dropped += r.action == action::kDropLoss;
  EXPECT_EQ(dropped, 50);
}

TEST(Simulator, MiddleboxAttachDetach) {
  Simulator sim(Topology::canonical(), 1);
  Counter box, other;
  box.drop = true;
  ASSERT_TRUE(sim.attach_middlebox(2, &box));
  EXPECT_FALSE(sim.attach_middlebox(2, &other));
  EXPECT_FALSE(sim.attach_middlebox(9, &other));
  auto& a = sim.add_node(Side::client, kA);
  auto& b = sim.add_node(Side::destination, kB);
  int delivered = 0;
  b.bind(80, [&](const Packet&) { ++delivered; });
  a.send(packet(kA, kB));
  sim.run();
  EXPECT_EQ(delivered, 0);
  sim.detach(2);
  for (int i = 0; i < 5; ++i) a.send(packet(kA, kB));
  sim.run();
  EXPECT_EQ(delivered, 5);
}

// Mixed traffic with loss, low TTLs and a dropping censor. Every packet
// ends exactly once and time never runs backwards.
std::string busy_run(std::uint64_t seed, std::vector<LogRecord>* out = nullptr) {
  LinkSpec l;
  l.loss = 0.1;
  Simulator sim(Topology::canonical(false, l), seed);
  struct Dropper : Middlebox {
    Disposition process(Packet& p, HopContext&) override {
      Disposition d;
      if (p.payload.size() % 7 == 0) d.action = Disposition::Action::drop;
      return d;
    }
  } box;
  (void)sim.attach_middlebox(2, &box);
  auto& a = sim.add_node(Side::client, kA);
  auto& b = sim.add_node(Side::destination, kB);
  b.bind(80, [&](const Packet& p) {
    if (p.payload.size() > 100) b.send(packet(kB, kA, 20));
  });
  a.bind(1000, [](const Packet&) {});
  Rng rng(seed);
  for (int i = 0; i < 300; ++i)
    sim.schedule_at(rng.uniform(0, 2'000'000), [&a, n = rng.uniform(1, 1400), ttl = static_cast<int>(rng.uniform(1, 6))] {
      a.send(packet(kA, kB, n, ttl));
    });
  sim.run();
  if (out) *out = sim.log().records();
  return sim.log().csv();
}

TEST(Simulator, ConservationAndMonotonicity) {
  std::vector<LogRecord> recs;
  busy_run(3, &recs);
  std::map<std::uint64_t, int> terminal;
  std::map<std::uint64_t, int> started;
  TimeUs last = 0;
  for (const auto& r : recs) {
    EXPECT_GE(r.time, last);
    last = r.time;
    if (r.action == action::kSend || r.action == action::kInject) ++started[r.packet_id];
    if (is_terminal(r.action)) ++terminal[r.packet_id];
  }
  EXPECT_GT(started.size(), 300u);
  for (const auto& [id, n] : started) {
    EXPECT_EQ(n, 1) << id;
    EXPECT_EQ(terminal[id], 1) << id;
  }
  EXPECT_EQ(terminal.size(), started.size());
}

TEST(Simulator, SameSeedSameLog) {
  EXPECT_EQ(busy_run(5), busy_run(5));
  EXPECT_NE(busy_run(5), busy_run(6));
}

TEST(Simulator, CsvFormat) {
  std::string csv = busy_run(7);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time_us,hop,packet_id,action,flow");
}

TEST(Simulator, TimersRunInOrder) {
  Simulator sim(Topology::direct(), 1);
  std::vector<int> order;
  sim.schedule_at(50, [&] { order.push_back(2); });
  sim.schedule_at(10, [&] { order.push_back(1); });
  sim.schedule_at(50, [&] { order.push_back(3); });
  sim.run_until(40);
  EXPECT_EQ(order, (std::vector<int>{1}));
  EXPECT_EQ(sim.now(), 40u);
  sim.run();
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
}

TEST(Deflector, TaggedFlowsGoToTheProxy) {
  Rng rng(9);
  const Bytes key(32, 7);
  for (bool right_key : {true, false}) {
    Simulator sim(Topology::canonical(true), 1);
    ASSERT_TRUE(transports::attach_decoy_router(sim, key, kB));
    auto& a = sim.add_node(Side::client, kA);
    auto& proxy = sim.add_node(Side::destination, kB);
    auto& overt = sim.add_node(Side::destination, kOvert);
    int at_proxy = 0, at_overt = 0;
    proxy.bind_default([&](const Packet& p) {
      ++at_proxy;
      EXPECT_EQ(p.deflected_from, kOvert);
    });
    overt.bind_default([&](const Packet&) { ++at_overt; });
    Packet first = packet(kA, kOvert, 0);
    first.kind = PacketKind::handshake;
    first.payload = transports::decoy_make_nonce(right_key ? key : Bytes(32, 8), rng);
    a.send(first);
    for (int i = 0; i < 4; ++i) a.send(packet(kA, kOvert));
    sim.run();
    EXPECT_EQ(at_proxy, right_key ? 5 : 0);
    EXPECT_EQ(at_overt, right_key ? 0 : 5);
  }
}

TEST(Addresses, FormatAndParse) {
  EXPECT_EQ(format_address(kA), "10.0.0.2");
  EXPECT_EQ(parse_address("198.51.100.7"), kB);
  EXPECT_FALSE(parse_address("1.2.3"));
  EXPECT_FALSE(parse_address("1.2.3.256"));
}

}  // namespace
}  // namespace tt::netsim
