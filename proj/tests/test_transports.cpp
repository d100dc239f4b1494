#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <boost/regex.hpp>
#include <numeric>

#include "support.hpp"
#include "tt/transports/aead.hpp"
#include "tt/transports/decoy.hpp"
#include "tt/transports/format_template.hpp"
#include "tt/transports/mux.hpp"
#include "tt/transports/shaping.hpp"
#include "tt/transports/sim_transport.hpp"
#include "tt/transports/ticket.hpp"
#include "tt/transports/trace_model.hpp"
#include "tt/transports/uniform_dh.hpp"
#include "tt/util/crypto.hpp"
#include "tt/util/stats.hpp"

namespace tt::transports {
namespace {

const std::string kTraceDir = std::string(TT_SOURCE_DIR) + "/data/traces/";

// ---- encryption ----

std::pair<AeadLayer, AeadLayer> aead_pair() {
  AeadLayer a, b;
  a.install_keys(static_session_keys(Role::client));
  b.install_keys(static_session_keys(Role::server));
  return {std::move(a), std::move(b)};
}

TEST(Aead, RoundTripAcrossArbitrarySplits) {
  auto [tx, rx] = aead_pair();
  Rng rng(4);
  Bytes plain = rng.bytes(50000);
  Bytes wire = tx.encode(plain);
  EXPECT_GT(wire.size(), plain.size());
  Bytes out;
  for (std::size_t at = 0; at < wire.size();) {
    std::size_t n = std::min<std::size_t>(wire.size() - at, rng.uniform(1, 3000));
    auto got = rx.decode(ByteView(wire).subspan(at, n));
    ASSERT_TRUE(got);
    append(out, *got);
    at += n;
  }
  EXPECT_EQ(out, plain);
  EXPECT_EQ(rx.buffered(), 0u);
}

TEST(Aead, FlippedBitIsAnIntegrityError) {
  auto [tx, rx] = aead_pair();
  Bytes wire = tx.encode(to_bytes("hello"));
  wire[wire.size() / 2] ^= 0x40;
  auto got = rx.decode(wire);
  ASSERT_FALSE(got);
  EXPECT_EQ(got.error().kind, ErrorKind::integrity);
}

TEST(Aead, CiphertextLooksRandom) {
  auto [tx, rx] = aead_pair();
  Bytes wire = tx.encode(Bytes(64 * 1024, 'A'));
  EXPECT_GE(shannon_entropy(wire), 7.99);
  EXPECT_FALSE(find(wire, to_bytes("AAAA")));
}

TEST(Aead, SameRecordTwiceEncryptsDifferently) {
  auto [tx, rx] = aead_pair();
  Bytes a = tx.encode(to_bytes("same"));
  Bytes b = tx.encode(to_bytes("same"));
  EXPECT_NE(a, b);
  Bytes both = a;
  append(both, b);
  auto got = rx.decode(both);
  ASSERT_TRUE(got);
  EXPECT_EQ(tt::to_string(*got), "samesame");
}

// ---- multiplexing ----

TEST(Mux, FrameCodecAndChecksum) {
  Frame f{3, 77, to_bytes("payload")};
  Bytes wire = encode_frame(f);
  ASSERT_EQ(wire.size(), kFrameHeader + 7);
  auto p = parse_frame(wire);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->frame, f);
  EXPECT_TRUE(p->checksum_ok);
  EXPECT_EQ(p->size, wire.size());
  EXPECT_FALSE(parse_frame(ByteView(wire).first(wire.size() - 1)));
  wire.back() ^= 1;
  EXPECT_FALSE(parse_frame(wire)->checksum_ok);
}

// Every arrival order of four frames reassembles to the original stream.
TEST(Mux, AllArrivalOrdersOfFourFrames) {
  const Bytes data = to_bytes("abcdefghijklmnopqrstuvwxyz0123456789");
  std::uint32_t seq = 0;
  auto frames = mux_frame(1, data, seq, 9);
  ASSERT_EQ(frames.size(), 4u);
  std::array<int, 4> order;
  std::iota(order.begin(), order.end(), 0);
  int n = 0;
  do {
    Reassembler r;
    Bytes out;
    for (int i : order) {
      ASSERT_TRUE(r.push(frames[static_cast<std::size_t>(i)]));
      append(out, r.take(1));
    }
    EXPECT_EQ(out, data);
    EXPECT_EQ(r.held(), 0u);
    ++n;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(n, 24);
}

TEST(Mux, StreamsAreIndependentAndWindowIsBounded) {
  Reassembler r;
  ASSERT_TRUE(r.push({1, 1, to_bytes("b")}));
  ASSERT_TRUE(r.push({2, 0, to_bytes("x")}));
  EXPECT_EQ(tt::to_string(r.take(2)), "x");
  EXPECT_TRUE(r.take(1).empty());
  ASSERT_TRUE(r.push({1, 0, to_bytes("a")}));
  EXPECT_EQ(tt::to_string(r.take(1)), "ab");
  EXPECT_FALSE(r.push({1, 2 + kReorderWindow + 1, to_bytes("far")}));
}

TEST(Mux, LayerDropsCorruptFrames) {
  MuxLayer tx(100), rx(100);
  Bytes wire = tx.encode(to_bytes("first"));
  Bytes bad = tx.encode(to_bytes("second"));
  bad.back() ^= 0xff;
  append(wire, bad);
  auto got = rx.decode(wire);
  ASSERT_TRUE(got);
  EXPECT_EQ(tt::to_string(*got), "first");
  EXPECT_EQ(rx.integrity_failures(), 1u);
}

// ---- content obfuscation ----

class ObfTemplate : public ::testing::TestWithParam<TokenEncoding> {};

TEST_P(ObfTemplate, RandomChunksMatchRegexAndInvert) {
  FormatTemplate t;
  t.encoding = GetParam();
  Rng rng(5);
  for (Role sender : {Role::client, Role::server}) {
    const boost::regex re(t.acceptance_regex(sender));
    Bytes all;
    for (int i = 0; i < 1000; ++i) {
      Bytes chunk = rng.bytes(rng.uniform(0, t.capacity(sender)));
      const std::string msg = obf_encode(t, sender, chunk);
      ASSERT_TRUE(boost::regex_match(msg, re)) << msg.substr(0, 80);
      ASSERT_TRUE(matches_acceptance(t, sender, msg));
      auto dec = obf_decode(t, sender, to_bytes(msg));
      ASSERT_TRUE(dec);
      ASSERT_TRUE(dec->has_value());
      EXPECT_EQ((*dec)->payload, chunk);
      EXPECT_EQ((*dec)->size, msg.size());
      append(all, to_bytes(msg));
    }
    // A 64-symbol alphabet sits right at 6 bits, so the bound is for hex.
    if (t.encoding == TokenEncoding::hex) {
      EXPECT_LT(shannon_entropy(all), 6.0);
    }
    EXPECT_LT(shannon_entropy(all), 6.2);
  }
}

INSTANTIATE_TEST_SUITE_P(Encodings, ObfTemplate, ::testing::Values(TokenEncoding::hex, TokenEncoding::base64));

TEST(Obf, OversizedChunkThrows) {
  FormatTemplate t;
  EXPECT_THROW(obf_encode(t, Role::server, Bytes(t.capacity(Role::server) + 1)), std::length_error);
}

TEST(Obf, TokensRoundTrip) {
  Rng rng(6);
  for (std::size_t n = 0; n < 40; ++n) {
    Bytes b = rng.bytes(n);
    for (auto enc : {TokenEncoding::hex, TokenEncoding::base64}) {
      auto tok = encode_token(b, enc);
      EXPECT_EQ(decode_token(tok, enc), b);
    }
  }
  EXPECT_FALSE(decode_token("a", TokenEncoding::base64));
  EXPECT_FALSE(decode_token("ab+/", TokenEncoding::base64));
}

TEST(Obf, LayerStreamsAcrossMessagesAndRejectsForeignBytes) {
  HttpObfsLayer tx(Role::client, {}), rx(Role::server, {});
  Rng rng(7);
  Bytes data = rng.bytes(5000);
  Bytes wire = tx.encode(data);
  Bytes out;
  for (std::size_t at = 0; at < wire.size(); at += 333) {
    auto got = rx.decode(ByteView(wire).subspan(at, std::min<std::size_t>(333, wire.size() - at)));
    ASSERT_TRUE(got);
    append(out, *got);
  }
  EXPECT_EQ(out, data);
  HttpObfsLayer other(Role::server, {});
  EXPECT_FALSE(other.decode(to_bytes("POST /x HTTP/1.1\r\n\r\n")));
}

// ---- session init ----

TEST(UniformDh, BothSidesAgreeAndWireIsUniform) {
  Bytes pooled;
  for (std::uint64_t s = 0; s < 40; ++s) {
    UniformDhLayer c(Role::client, s * 2 + 1), srv(Role::server, s * 2 + 2);
    Bytes first = c.start();
    ASSERT_EQ(first.size(), kDhSize);
    EXPECT_TRUE(srv.start().empty());
    auto sstep = srv.on_receive(first);
    ASSERT_EQ(sstep.status, SessionInitLayer::Status::established);
    auto cstep = c.on_receive(sstep.reply);
    ASSERT_EQ(cstep.status, SessionInitLayer::Status::established);
    EXPECT_EQ(c.keys().send_key, srv.keys().recv_key);
    EXPECT_EQ(c.keys().recv_key, srv.keys().send_key);
    EXPECT_NE(c.keys().send_key, c.keys().recv_key);
    append(pooled, first);
    append(pooled, sstep.reply);
  }
  EXPECT_GT(chi_square_uniform(pooled).p_value, 0.01);
}

TEST(UniformDh, RejectsDegeneratePublicValues) {
  Rng rng(8);
  auto kp = dh_generate(rng);
  Bytes one(kDhSize, 0);
  one.back() = 1;
  EXPECT_FALSE(dh_shared(kp.private_key, one));
  EXPECT_FALSE(dh_shared(kp.private_key, Bytes(kDhSize, 0)));
  EXPECT_FALSE(dh_shared(kp.private_key, dh_prime()));
}

struct TicketBench {
  netsim::Simulator sim{netsim::Topology::direct(), 1};
  ServerState state;
  Secrets server_secrets;
  Bytes master = Bytes(32, 9);

  TicketBench() { server_secrets.ticket_master_key = master; }

  LayerContext ctx(Role role, std::uint64_t seed, const Secrets* s) {
    LayerContext c;
    c.role = role;
    c.sim = &sim;
    c.seed = seed;
    c.secrets = s;
    c.server_state = &state;
    return c;
  }
  TicketAuthority& authority() { return ticket_authority(state, master, 3600); }
};

TEST(Ticket, AuthorityChecks) {
  TicketAuthority a(Bytes(32, 1), 60);
  auto g = a.issue(0);
  EXPECT_EQ(g.ticket.size(), kTicketSize);
  EXPECT_EQ(a.check(g.ticket, netsim::from_seconds(59)), TicketCheck::valid);
  EXPECT_EQ(a.check(g.ticket, netsim::from_seconds(61)), TicketCheck::expired);
  EXPECT_EQ(a.check(ByteView(g.ticket).first(10), 0), TicketCheck::malformed);
  Bytes forged = g.ticket;
  forged[0] ^= 1;
  EXPECT_EQ(a.check(forged, 0), TicketCheck::bad_mac);
  EXPECT_EQ(a.secret_for(g.ticket), g.secret);
  EXPECT_TRUE(a.redeem(g.ticket, 0));
  EXPECT_EQ(a.check(g.ticket, 0), TicketCheck::replayed);
  EXPECT_FALSE(a.redeem(g.ticket, 0));
  TicketAuthority other(Bytes(32, 2), 60);
  EXPECT_EQ(other.check(g.ticket, 0), TicketCheck::bad_mac);
}

TEST(Ticket, HandshakeEstablishesAndHandsOverNextTicket) {
  TicketBench b;
  Secrets cs;
  cs.ticket = b.authority().issue(0);
  SideBand sb;
  auto cctx = b.ctx(Role::client, 1, &cs);
  cctx.sideband = &sb;
  TicketLayer client(cctx, {});
  TicketLayer server(b.ctx(Role::server, 2, &b.server_secrets), {});
  auto s = server.on_receive(client.start());
  ASSERT_EQ(s.status, SessionInitLayer::Status::established);
  auto c = client.on_receive(s.reply);
  ASSERT_EQ(c.status, SessionInitLayer::Status::established);
  EXPECT_EQ(client.keys().send_key, server.keys().recv_key);
  const Bytes* next = sb.get(kNextTicketKey);
  ASSERT_NE(next, nullptr);
  ASSERT_EQ(next->size(), kTicketSize + kTicketSecretSize);
  EXPECT_EQ(b.authority().check(ByteView(*next).first(kTicketSize), 0), TicketCheck::valid);
}

TEST(Ticket, ServerNeverAnswersFuzzOrReplay) {
  TicketBench b;
  Rng rng(10);
  for (int i = 0; i < 500; ++i) {
    TicketLayer server(b.ctx(Role::server, 100 + static_cast<std::uint64_t>(i), &b.server_secrets), {});
    Bytes junk = rng.bytes(rng.uniform(0, 700));
    auto step = server.on_receive(junk);
    EXPECT_TRUE(step.reply.empty());
    EXPECT_NE(step.status, SessionInitLayer::Status::established);
  }
  Secrets cs;
  cs.ticket = b.authority().issue(0);
  TicketLayer client(b.ctx(Role::client, 1, &cs), {});
  const Bytes first = client.start();
  TicketLayer s1(b.ctx(Role::server, 2, &b.server_secrets), {});
  EXPECT_EQ(s1.on_receive(first).status, SessionInitLayer::Status::established);
  TicketLayer s2(b.ctx(Role::server, 3, &b.server_secrets), {});
  auto replay = s2.on_receive(first);
  EXPECT_EQ(replay.status, SessionInitLayer::Status::silent);
  EXPECT_TRUE(replay.reply.empty());
}

TEST(Decoy, TagVerifiesOnlyUnderTheRightKey) {
  Rng rng(11);
  Bytes key(32, 3), wrong(32, 4);
  Bytes tags;
  for (int i = 0; i < 200; ++i) {
    Bytes nonce = decoy_make_nonce(key, rng);
    ASSERT_EQ(nonce.size(), kDecoyNonceSize);
    EXPECT_TRUE(decoy_verify_nonce(key, nonce));
    EXPECT_FALSE(decoy_verify_nonce(wrong, nonce));
    tags.insert(tags.end(), nonce.end() - kDecoyTagSize, nonce.end());
  }
  EXPECT_GT(chi_square_uniform(tags).p_value, 0.01);
  EXPECT_FALSE(decoy_verify_nonce(key, rng.bytes(kDecoyNonceSize)));
}

// ---- timing and length ----

TEST(TraceModel, ParsesAndRejects) {
  std::string csv = "length,iat_ms\n";
  for (int i = 0; i < 100; ++i) csv += std::to_string(100 + i) + "," + std::to_string(i % 7) + ".5\n";
  auto m = TraceModel::parse(csv, "mem");
  ASSERT_TRUE(m) << m.error().message;
  EXPECT_EQ(m->rows(), 100u);
  double total = 0;
  for (auto& [len, p] : m->length_histogram()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-9);

  EXPECT_FALSE(TraceModel::parse("length,iat_ms\n10,1\n", "short"));
  auto three = TraceModel::parse("10,1\n20,2\n30,3\n", "three", {3});
  EXPECT_TRUE(three);
  auto bad = TraceModel::parse("10,1\n20,x\n30,3\n", "bad", {1});
  ASSERT_FALSE(bad);
  EXPECT_EQ(bad.error().row, 2u);
  EXPECT_FALSE(TraceModel::parse("10,-1\n", "neg", {1}));
  auto big = TraceModel::parse("9000,1\n", "big", {1});
  ASSERT_TRUE(big);
  EXPECT_EQ(big->clamped(), 1u);
  EXPECT_EQ(big->length_histogram().begin()->first, static_cast<int>(netsim::kMtu));
  EXPECT_FALSE(TraceModel::load("/nonexistent/trace.csv"));
}

TEST(Shaper, UnitsCarryDataAndPadding) {
  for (auto mode : {PaddingMode::random, PaddingMode::zero, PaddingMode::ascii}) {
    IidParams p;
    p.seed = 3;
    PacketShaper tx(iid_sampler(p), mode, 1), rx(iid_sampler(p), mode, 2);
    Rng rng(12);
    Bytes data = rng.bytes(20000);
    tx.enqueue(data);
    Bytes out;
    int units = 0;
    while (tx.pending()) {
      Bytes unit = tx.build_unit();
      EXPECT_LE(unit.size(), netsim::kMtu);
      auto got = rx.deshape(unit);
      ASSERT_TRUE(got);
      append(out, *got);
      ++units;
    }
    EXPECT_EQ(out, data);
    EXPECT_GT(units, 10);
  }
}

TEST(Shaper, RejectsLyingPrefix) {
  PacketShaper rx(iid_sampler({}), PaddingMode::zero, 1);
  Bytes unit = {0x10, 0x00, 1, 2, 3};
  EXPECT_FALSE(rx.deshape(unit));
}

TEST(Shaper, IidDistributionIsFixedBySeed) {
  IidParams a;
  a.seed = 5;
  IidParams b = a;
  b.seed = 6;
  auto sa = iid_sampler(a), sa2 = iid_sampler(a), sb = iid_sampler(b);
  EXPECT_EQ(sa.length_values(), sa2.length_values());
  EXPECT_NE(sa.length_values(), sb.length_values());
  for (int v : sa.length_values()) {
    EXPECT_GE(v, a.length_min);
    EXPECT_LE(v, a.length_max);
  }
}

// Lengths and gaps drawn by the shaper follow the trace it was given.
TEST(Shaper, TraceShapingMatchesTarget) {
  auto model = TraceModel::load(kTraceDir + "http_browsing.csv");
  ASSERT_TRUE(model);
  PacketShaper shaper(model->sampler(), PaddingMode::random, 13);
  shaper.enqueue(Bytes(20'000'000, 0));
  std::vector<double> lengths, gaps;
  for (int i = 0; i < 10000; ++i) {
    gaps.push_back(netsim::to_ms(shaper.next_gap()));
    lengths.push_back(static_cast<double>(shaper.build_unit().size()));
  }
  EXPECT_LE(ks_distance(lengths, model->raw_lengths()), 0.05);
  EXPECT_LE(ks_distance(gaps, model->raw_iats_ms()), 0.05);
}

TEST(PortHopping, BothEndsPredictTheSameWalk) {
  auto a = PortPolicy::hopping(7, 2000, 2100);
  auto b = PortPolicy::hopping(7, 2000, 2100);
  auto c = PortPolicy::hopping(8, 2000, 2100);
  auto sa = hop_sequence(a, 200);
  EXPECT_EQ(sa, hop_sequence(b, 200));
  EXPECT_NE(sa, hop_sequence(c, 200));
  std::set<std::uint16_t> distinct(sa.begin(), sa.end());
  EXPECT_GT(distinct.size(), 50u);
  for (auto p : sa) {
    EXPECT_GE(p, 2000);
    EXPECT_LE(p, 2100);
  }
  EXPECT_EQ(a.listen_ports().size(), 101u);
  EXPECT_EQ(PortPolicy::fixed_port(443).listen_ports(), std::vector<std::uint16_t>{443});
}

}  // namespace
}  // namespace tt::transports
