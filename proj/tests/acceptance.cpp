// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <array>
#include <boost/regex.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "support.hpp"
#include "tt/censor/censor.hpp"
#include "tt/harness/cli.hpp"
#include "tt/harness/config.hpp"
#include "tt/harness/matrix.hpp"
#include "tt/harness/prober.hpp"
#include "tt/harness/scenario.hpp"
#include "tt/transports/aead.hpp"
#include "tt/transports/decoy.hpp"
#include "tt/transports/format_template.hpp"
#include "tt/transports/shaping.hpp"
#include "tt/transports/trace_model.hpp"
#include "tt/util/stats.hpp"

namespace {

using namespace tt;
using censor::AttackNode;
using netsim::from_seconds;

const std::string kSrc = TT_SOURCE_DIR;
constexpr netsim::Address kOvert = harness::kOvertAddr;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report line.
struct Tally {
  std::size_t failures = 0;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures;
    if (notes.size() < 3) notes.push_back(what);
  }
  Outcome result(std::string detail) const {
    for (const auto& n : notes) detail += "; " + n;
    return {failures == 0, detail};
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ValidatedStack builtin(const std::string& name_or_layers) {
  auto d = harness::named_stack(name_or_layers);
  if (!d) d = *parse_stack("custom", name_or_layers);
  auto v = harness::validate_builtin(*d);
  if (!v) throw std::runtime_error(v.error().message());
  return *v;
}

Result<Bytes, LayerError> echo_once(const ValidatedStack& stack, netsim::Node& node, netsim::Simulator& sim,
                                    const ClientConfig& cc, ByteView data) {
  auto ch = open_channel(stack, node, cc);
  if (!ch) return fail(ch.error());
  if (auto s = (*ch)->send(data); !s) return fail(s.error());
  // Shaped stacks pace their output, so allow plenty of virtual time.
  auto got = recv_exact(**ch, sim, data.size(), from_seconds(3600));
  (*ch)->close();
  return got;
}

// Client, overt destination and covert proxy behind a keyed deflector.
struct DecoyRig {
  std::unique_ptr<netsim::Simulator> sim;
  netsim::Node* client = nullptr;
  netsim::Node* overt = nullptr;
  std::unique_ptr<Server> server;
  Bytes key = Bytes(32, 0x11);
  std::size_t overt_packets = 0;

  DecoyRig(const ValidatedStack& stack, std::uint64_t seed) {
    sim = std::make_unique<netsim::Simulator>(netsim::Topology::canonical(true), seed);
    sim->log().set_enabled(false);
    client = &sim->add_node(netsim::Side::client, testing::kClient);
    auto& proxy = sim->add_node(netsim::Side::destination, testing::kServer);
    overt = &sim->add_node(netsim::Side::destination, kOvert);
    overt->bind_default([this](const netsim::Packet&) { ++overt_packets; });
    if (!transports::attach_decoy_router(*sim, key, testing::kServer)) throw std::runtime_error("no deflector hop");
    ServerConfig sc;
    sc.secrets.deflection_key = key;
    sc.seed = derive_seed(seed, "server");
    sc.app = echo_app();
    server = std::make_unique<Server>(stack, proxy, sc);
  }
  ClientConfig config(std::uint64_t seed) const {
    ClientConfig cc;
    cc.server = kOvert;
    cc.seed = seed;
    cc.secrets.deflection_key = key;
    return cc;
  }
};

// ---- 1 ----
Outcome channel_contract() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& named = harness::named_stacks();
  Rng rng(2015);
  Tally t;
  std::size_t trips = 0;
  std::uint64_t bytes = 0;
  const std::size_t total = 1000;
  for (std::size_t s = 0; s < named.size(); ++s) {
    const ValidatedStack stack = builtin(named[s].name);
    const std::size_t share = total / named.size() + (s < total % named.size() ? 1 : 0);
    const bool decoy = stack.find(LayerKind::session_init) && stack.find(LayerKind::session_init)->impl == "decoy";
    std::unique_ptr<testing::Rig> rig;
    std::unique_ptr<DecoyRig> drig;
    if (decoy) {
      drig = std::make_unique<DecoyRig>(stack, 100 + s);
    } else {
      rig = std::make_unique<testing::Rig>(stack, 100 + s);
    }
    for (std::size_t i = 0; i < share; ++i) {
      const Bytes data = rng.bytes(rng.uniform(0, 1 << 20));
      auto got = decoy ? echo_once(stack, *drig->client, *drig->sim, drig->config(rng.next()), data)
                       : echo_once(stack, *rig->client, *rig->sim, rig->client_config(rng.next()), data);
      t.require(got && *got == data, named[s].name + " size " + std::to_string(data.size()) +
                                        (got ? " mismatch" : ": " + got.error().message()));
      ++trips;
      bytes += data.size();
    }
    if (decoy) t.require(drig->overt_packets == 0, "decoy traffic reached the overt host");
  }
  const double secs = seconds_since(t0);
  t.require(secs < 60, "took " + fmt("%.1f s", secs));
  return t.result(std::to_string(trips) + " round trips over " + std::to_string(named.size()) + " stacks, " +
                  fmt("%.0f MiB", static_cast<double>(bytes) / (1 << 20)) + ", " + fmt("%.1f s", secs));
}

// ---- 2 ----
Outcome ordering_validation() {
  const std::array<std::string, 5> canonical = {"ENC:aead", "MUX:frame", "OBF:http", "TIMLEN:iid", "TRN:sim"};
  std::array<int, 5> idx;
  std::iota(idx.begin(), idx.end(), 0);
  Tally t;
  int seen = 0, accepted = 0;
  do {
    ++seen;
    std::string layers;
    for (int i : idx) layers += (layers.empty() ? "" : ", ") + canonical[static_cast<std::size_t>(i)];
    auto v = harness::validate_builtin(*parse_stack("p", layers));
    const bool is_canonical = std::is_sorted(idx.begin(), idx.end());
    t.require(static_cast<bool>(v) == is_canonical, layers);
    if (v) {
      ++accepted;
      continue;
    }
    std::string want;
    int highest = -1;
    for (std::size_t i = 0; i < idx.size() && want.empty(); ++i) {
      if (idx[i] == 4 && i + 1 != idx.size()) want = rule::kTransportLast;
      else if (idx[i] < highest) want = rule::kRankOrder;
      highest = std::max(highest, idx[i]);
    }
    t.require(v.error().rule == want, layers + ": " + v.error().rule);
  } while (std::next_permutation(idx.begin(), idx.end()));
  t.require(seen == 120 && accepted == 1, "counts");
  return t.result(std::to_string(seen) + " orderings, " + std::to_string(accepted) + " accepted");
}

// ---- 3 ----
netsim::Packet keyword_packet(std::string_view body, std::uint16_t sport) {
  netsim::Packet p;
  p.key = {harness::kClientAddr, sport, harness::kProxyAddr, 9443};
  p.payload = to_bytes(body);
  return p;
}

Outcome block_duration() {
  censor::CensorPolicy policy;
  policy.enabled = {AttackNode::FPR_CON};
  policy.keywords = {"falun"};
  Tally t;
  for (double start : {0.0, 1.5, 1234.567891}) {
    censor::Inspector insp(policy);
    censor::PacketContext c;
    c.now = from_seconds(start);
    t.require(insp.inspect(keyword_packet("falun", 40000), c).type == censor::Verdict::Type::inject_rst, "no block");
    c.now = from_seconds(start) + from_seconds(89.999);
    const auto before = insp.inspect(keyword_packet("hello", 40001), c).type;
    c.now = from_seconds(start) + from_seconds(90.001);
    const auto after = insp.inspect(keyword_packet("hello", 40002), c).type;
    t.require(before == censor::Verdict::Type::drop, "not dropped at +89.999 s");
    t.require(after == censor::Verdict::Type::allow, "still blocked at +90.001 s");
  }
  return t.result("dropped at +89.999 s, allowed at +90.001 s");
}

// ---- 4 ----
Outcome entropy_contrast() {
  Tally t;
  transports::AeadLayer tx;
  tx.install_keys(tt::static_session_keys(Role::client));
  const Bytes sealed = tx.encode(Bytes(64 * 1024, 'A'));
  const double enc_h = shannon_entropy(sealed);
  t.require(enc_h >= 7.99, "sealed entropy " + fmt("%.4f", enc_h));

  transports::FormatTemplate tmpl;
  const boost::regex re(tmpl.acceptance_regex(Role::client));
  Rng rng(4);
  Bytes pooled;
  std::string first_obf;
  for (int i = 0; i < 1000; ++i) {
    const std::string msg = transports::obf_encode(tmpl, Role::client, rng.bytes(rng.uniform(1, tmpl.capacity(Role::client))));
    t.require(boost::regex_match(msg, re), "output outside the acceptance regex");
    if (first_obf.empty()) first_obf = msg;
    append(pooled, to_bytes(msg));
  }
  const double obf_h = shannon_entropy(pooled);
  t.require(obf_h < 6.0, "obfuscated entropy " + fmt("%.4f", obf_h));

  censor::CensorPolicy policy;
  policy.enabled = {AttackNode::FPR_CON};
  policy.entropy_threshold = 7.2;
  policy.fingerprint_action = censor::FingerprintAction::flag;
  auto first_packet = [&](ByteView wire) {
    censor::Inspector insp(policy);
    netsim::Packet p = keyword_packet("", 40000);
    p.payload.assign(wire.begin(), wire.begin() + static_cast<std::ptrdiff_t>(std::min(wire.size(), netsim::kMtu)));
    censor::PacketContext c;
    return insp.inspect(p, c).type == censor::Verdict::Type::flag;
  };
  const bool enc_flagged = first_packet(sealed);
  const bool obf_flagged = first_packet(to_bytes(first_obf));
  t.require(enc_flagged, "sealed first packet not flagged");
  t.require(!obf_flagged, "obfuscated first packet flagged");
  return t.result("sealed " + fmt("%.4f", enc_h) + " bits/byte (flagged), obfuscated " + fmt("%.4f", obf_h) +
                  " bits/byte (passed)");
}

// ---- 5 ----
// Raw connections from fresh addresses: random first flights, and verbatim
// replays of a legitimate client's packets.
std::uint64_t probe_server(const std::string& stack_name, std::size_t n, std::size_t* connections = nullptr) {
  const ValidatedStack stack = builtin(stack_name);
  testing::Rig rig(stack, 77);
  std::vector<netsim::Packet> legit;
  rig.sim->set_delivery_observer([&](const netsim::Packet& p) {
    if (p.key.dst_addr == testing::kServer && p.key.src_addr == testing::kClient) legit.push_back(p);
  });
  if (!rig.round_trip(to_bytes("legitimate session"), 1)) throw std::runtime_error("legitimate session failed");
  rig.sim->set_delivery_observer(nullptr);

  Rng rng(78);
  std::vector<netsim::Address> sources;
  for (std::size_t i = 0; i < n; ++i) {
    const netsim::Address src = (10u << 24) | (2u << 16) | static_cast<netsim::Address>(i + 1);
    sources.push_back(src);
    auto& node = rig.sim->add_node(netsim::Side::client, src);
    node.bind_default([](const netsim::Packet&) {});
    std::vector<netsim::Packet> flight;
    if (i % 2 == 0) {
      netsim::Packet p;
      p.key = {src, 40000, testing::kServer, 9443};
      p.kind = netsim::PacketKind::handshake;
      flight.push_back(p);
      std::uint32_t seq = 0;
      for (std::size_t k = rng.uniform(1, 3); k > 0; --k) {
        netsim::Packet d = p;
        d.kind = netsim::PacketKind::data;
        d.payload = rng.bytes(rng.uniform(1, 1400));
        d.seq = seq;
        seq += static_cast<std::uint32_t>(d.payload.size());
        flight.push_back(d);
      }
    } else {
      for (netsim::Packet p : legit) {
        p.key.src_addr = src;
        flight.push_back(p);
      }
    }
    const netsim::TimeUs at = rig.sim->now() + from_seconds(0.01 * static_cast<double>(i));
    for (std::size_t k = 0; k < flight.size(); ++k)
      rig.sim->schedule_at(at + netsim::from_ms(static_cast<double>(k)), [&node, p = flight[k]] { node.send(p); });
  }
  rig.sim->run_until(rig.sim->now() + from_seconds(0.01 * static_cast<double>(n) + 60));
  std::uint64_t bytes = 0;
  std::size_t answered = 0;
  for (auto a : sources) {
    bytes += rig.server->payload_bytes_to(a);
    answered += rig.server->payload_bytes_to(a) > 0;
  }
  if (connections) *connections = answered;
  return bytes;
}

Outcome probe_resistance() {
  Tally t;
  std::size_t ticket_answered = 0, dh_answered = 0;
  const std::uint64_t ticket_bytes = probe_server("SI:ticket, ENC:aead, TRN:sim", 1000, &ticket_answered);
  t.require(ticket_bytes == 0, "ticket server sent " + std::to_string(ticket_bytes) + " bytes");
  probe_server("SI:uniform_dh, ENC:aead, TRN:sim", 1000, &dh_answered);
  // Every random probe long enough to hold a public value gets an answer.
  t.require(dh_answered >= 400, "uniform DH answered only " + std::to_string(dh_answered));

  // A prober speaking each stack without its secrets.
  std::size_t dh_done = 0, ticket_done = 0;
  for (const char* name : {"scramblesuit", "obfs3"}) {
    const ValidatedStack stack = builtin(name);
    testing::Rig rig(stack, 79);
    harness::StackProber prober(*rig.sim, stack, 80);
    for (int i = 0; i < 20; ++i) prober.probe({testing::kServer, 9443, rig.sim->now(), "test"}, [](bool, netsim::TimeUs) {});
    rig.sim->run_until(rig.sim->now() + from_seconds(60));
    for (const auto& r : prober.records()) {
      if (std::string(name) == "obfs3") dh_done += r.handshake_done && r.confirmed;
      else ticket_done += r.handshake_done || r.confirmed || r.server_bytes > 0;
    }
  }
  t.require(dh_done == 20, "prober confirmed " + std::to_string(dh_done) + "/20 uniform DH servers");
  t.require(ticket_done == 0, "prober got through to the ticket server");

  // End to end: the censor's prober confirms and blocks the uniform DH server.
  auto cfg = harness::load_config(kSrc + "/configs/matrix/fpr-sem.cfg");
  if (!cfg) return {false, cfg.error().str()};
  std::size_t blocked = 0, ticket_blocked = 0;
  for (const char* name : {"obfs3", "scramblesuit"}) {
    harness::RunOptions ro;
    ro.stack = harness::named_stack(name);
    ro.trials = 10;
    auto run = harness::run_scenario(*cfg, ro);
    if (!run) return {false, run.error()};
    for (const auto& tr : run->report.trials) {
      const bool hit = tr.probes_confirmed > 0 && tr.node == "FPR.SEM" && tr.censored;
      (std::string(name) == "obfs3" ? blocked : ticket_blocked) += hit;
      if (std::string(name) == "scramblesuit") t.require(tr.probe_server_bytes == 0, "ticket server answered a probe");
    }
  }
  t.require(blocked == 10, "uniform DH blocked in " + std::to_string(blocked) + "/10 runs");
  t.require(ticket_blocked == 0, "ticket server blocked after probing");
  return t.result("ticket: 1000 probes, " + std::to_string(ticket_bytes) + " server bytes; uniform DH: " +
                  std::to_string(dh_answered) + "/1000 answered, prober blocked it in " + std::to_string(blocked) +
                  "/10 runs");
}

// ---- 6 ----
Outcome shaping_and_classifier() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  auto model = transports::TraceModel::load(kSrc + "/data/traces/http_browsing.csv");
  if (!model) return {false, model.error().message};
  transports::PacketShaper shaper(model->sampler(), transports::PaddingMode::random, 13);
  shaper.enqueue(Bytes(20'000'000, 0));
  std::vector<double> lengths, gaps;
  for (int i = 0; i < 10000; ++i) {
    gaps.push_back(netsim::to_ms(shaper.next_gap()));
    lengths.push_back(static_cast<double>(shaper.build_unit().size()));
  }
  const double ks_len = ks_distance(lengths, model->raw_lengths());
  const double ks_gap = ks_distance(gaps, model->raw_iats_ms());
  t.require(ks_len <= 0.05 && ks_gap <= 0.05, "KS " + fmt("%.4f", ks_len) + "/" + fmt("%.4f", ks_gap));

  auto tpr_of = [&](const std::string& file) -> std::optional<double> {
    auto cfg = harness::load_config(kSrc + "/configs/scenarios/" + file);
    if (!cfg || cfg->policy.training_packets != 10000 || cfg->policy.classifier.size() != 2) return std::nullopt;
    harness::RunOptions ro;
    ro.trials = 50;
    auto run = harness::run_scenario(*cfg, ro);
    if (!run) return std::nullopt;
    return run->report.tpr;
  };
  const auto unshaped = tpr_of("classifier-unshaped.cfg");
  const auto shaped = tpr_of("classifier-shaped.cfg");
  t.require(unshaped && *unshaped >= 0.9, "unshaped TPR " + (unshaped ? fmt("%.2f", *unshaped) : "n/a"));
  t.require(shaped && *shaped <= 0.1, "shaped TPR " + (shaped ? fmt("%.2f", *shaped) : "n/a"));
  const double secs = seconds_since(t0);
  t.require(secs < 300, "took " + fmt("%.1f s", secs));
  return t.result("KS lengths " + fmt("%.4f", ks_len) + ", gaps " + fmt("%.4f", ks_gap) + "; TPR unshaped " +
                  (unshaped ? fmt("%.2f", *unshaped) : "n/a") + ", shaped " + (shaped ? fmt("%.2f", *shaped) : "n/a") +
                  "; " + fmt("%.1f s", secs));
}

// ---- 7 ----
struct ScenarioSummary {
  std::size_t trials = 0, detected = 0, ok = 0;
};

ScenarioSummary summarize(const std::string& file, const std::optional<std::string>& stack = std::nullopt) {
  auto cfg = harness::load_config(kSrc + "/configs/scenarios/" + file);
  if (!cfg) throw std::runtime_error(cfg.error().str());
  harness::RunOptions ro;
  if (stack) ro.stack = *parse_stack("variant", *stack);
  auto run = harness::run_scenario(*cfg, ro);
  if (!run) throw std::runtime_error(run.error());
  ScenarioSummary s;
  for (const auto& tr : run->report.trials) {
    ++s.trials;
    s.detected += tr.detected;
    s.ok += tr.outcome == harness::Outcome::ok;
  }
  return s;
}

Outcome flow_transformations() {
  Tally t;
  // (a) the low-TTL reset purges the censor's state for the flow
  const auto ttl = summarize("ttl-rst.cfg");
  const auto ttl_base = summarize("ttl-rst.cfg", "TRN:sim");
  t.require(ttl.detected == 0 && ttl.ok == ttl.trials, "low-TTL reset: detected or broken");
  t.require(ttl_base.detected == ttl_base.trials, "keyword not caught without the reset");
  // (b) endpoints that ignore injected resets finish the transfer
  const auto ign = summarize("ignore-rst.cfg");
  const auto ign_base = summarize("ignore-rst.cfg", "TRN:sim");
  t.require(ign.detected == ign.trials && ign.ok == ign.trials, "ignoring resets did not complete");
  t.require(ign_base.ok == 0, "resets did not break the baseline");
  // (c) hopping ports splits the stream across reassembler entries
  const auto hop = summarize("port-hop.cfg");
  const auto hop_base = summarize("port-hop.cfg", "TRN:sim");
  t.require(hop.detected == 0 && hop.ok == hop.trials, "port hopping detected");
  t.require(hop_base.detected == hop_base.trials, "keyword not caught on a fixed port");
  auto frac = [](std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); };
  return t.result("(a) detected " + frac(ttl.detected, ttl.trials) + " vs " + frac(ttl_base.detected, ttl_base.trials) +
                  " baseline; (b) completed " + frac(ign.ok, ign.trials) + " vs " + frac(ign_base.ok, ign_base.trials) +
                  "; (c) detected " + frac(hop.detected, hop.trials) + " vs " + frac(hop_base.detected, hop_base.trials));
}

// ---- 8 ----
Outcome decoy_deflection() {
  Tally t;
  const ValidatedStack stack = builtin("decoy");
  DecoyRig rig(stack, 31);
  Bytes tags;
  std::size_t reached = 0, handshakes = 0;
  rig.sim->set_delivery_observer([&](const netsim::Packet& p) {
    if (p.kind != netsim::PacketKind::handshake || p.key.src_addr != testing::kClient) return;
    ++handshakes;
    reached += p.key.dst_addr == testing::kServer && p.deflected_from == kOvert;
    if (p.payload.size() >= transports::kDecoyNonceSize)
      tags.insert(tags.end(), p.payload.begin() + (transports::kDecoyNonceSize - transports::kDecoyTagSize),
                  p.payload.begin() + transports::kDecoyNonceSize);
  });
  Rng rng(32);
  std::size_t echoed = 0;
  for (int i = 0; i < 100; ++i) {
    const Bytes data = rng.bytes(rng.uniform(1, 4096));
    auto got = echo_once(stack, *rig.client, *rig.sim, rig.config(rng.next()), data);
    echoed += got && *got == data;
  }
  t.require(echoed == 100, "covert sessions completed " + std::to_string(echoed) + "/100");
  t.require(handshakes >= 100 && reached == handshakes, "handshakes deflected " + std::to_string(reached) + "/" +
                                                            std::to_string(handshakes));
  t.require(rig.overt_packets == 0, "overt host saw traffic");
  const auto chi = chi_square_uniform(tags);
  t.require(tags.size() == 100 * transports::kDecoyTagSize, "tag bytes " + std::to_string(tags.size()));
  t.require(chi.p_value > 0.01, "tag chi-square p " + fmt("%.4f", chi.p_value));
  return t.result(std::to_string(reached) + "/" + std::to_string(handshakes) + " tagged handshakes reached the proxy; tag p = " +
                  fmt("%.3f", chi.p_value));
}

// ---- 9 ----
Outcome coverage_matrix() {
  Tally t;
  auto suites = harness::load_config_dir(kSrc + "/configs/matrix");
  if (!suites) return {false, suites.error()};
  auto m = harness::build_matrix(*suites);
  if (!m) return {false, m.error()};
  using S = harness::MatrixCell::Status;
  auto status = [&](const std::string& stack, AttackNode n) {
    const auto* c = m->cell(stack, n);
    return c ? c->status : S::untested;
  };
  auto credited = [&](const std::string& stack, AttackNode n) {
    const auto* c = m->cell(stack, n);
    return c && !c->credited.empty();
  };
  for (AttackNode n : {AttackNode::FPR_CON, AttackNode::COR_CON, AttackNode::FPR_LEN, AttackNode::FPR_TIM,
                       AttackNode::FPR_SEM}) {
    t.require(status("scramblesuit", n) == S::protected_ && credited("scramblesuit", n),
              "scramblesuit " + std::string(censor::label(n)));
  }
  t.require(status("scramblesuit", AttackNode::BLK_ROU) == S::unprotected, "scramblesuit BLK.ROU");
  t.require(status("obfs3", AttackNode::FPR_CON) == S::protected_ && credited("obfs3", AttackNode::FPR_CON),
            "obfs3 FPR.CON");
  t.require(status("obfs3", AttackNode::FPR_SEM) == S::unprotected, "obfs3 FPR.SEM");
  const auto* plain = m->row("plaintext");
  t.require(plain != nullptr, "plaintext row missing");
  if (plain)
    for (const auto& c : plain->cells) t.require(c.status != S::protected_ && c.credited.empty(), "plaintext cell");

  const std::string md = harness::render_matrix(*m);
  t.require(m->divergences == harness::find_divergences(*m), "divergence list out of date");
  for (const auto& d : m->divergences) t.require(md.find(d) != std::string::npos, "divergence not reported: " + d);
  return t.result("rows match; " + std::to_string(m->divergences.size()) + " divergences from the reference listed");
}

// ---- 10 ----
Outcome determinism() {
  Tally t;
  const std::string cfg = kSrc + "/configs/scenarios/full-stack.cfg";
  std::array<std::string, 2> dirs = {testing::temp_dir("accept-det-a").string(),
                                     testing::temp_dir("accept-det-b").string()};
  for (const auto& d : dirs) {
    std::vector<std::string> args = {"tt", "run", cfg, "--seed", "42", "--out", d};
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = harness::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    t.require(code == harness::kExitOk, "run exited " + std::to_string(code) + ": " + err.str());
  }
  std::size_t bytes = 0;
  for (const char* f : {"/report.csv", "/events.csv"}) {
    const std::string a = testing::read_file(dirs[0] + f), b = testing::read_file(dirs[1] + f);
    t.require(!a.empty() && a == b, std::string(f) + " differs");
    bytes += a.size();
  }
  return t.result("report.csv and events.csv identical across two runs (" + std::to_string(bytes) + " bytes)");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"channel contract", channel_contract},
      {"ordering validation", ordering_validation},
      {"block duration", block_duration},
      {"entropy contrast", entropy_contrast},
      {"probe resistance", probe_resistance},
      {"shaping and classifier evasion", shaping_and_classifier},
      {"flow transformations", flow_transformations},
      {"decoy deflection", decoy_deflection},
      {"coverage matrix", coverage_matrix},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
