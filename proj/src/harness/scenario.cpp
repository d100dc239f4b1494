#include "tt/harness/scenario.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "tt/censor/censor.hpp"
#include "tt/core/endpoint.hpp"
#include "tt/harness/background.hpp"
#include "tt/harness/prober.hpp"
#include "tt/harness/stacks.hpp"
#include "tt/transports/builtin.hpp"
#include "tt/transports/decoy.hpp"
#include "tt/transports/ticket.hpp"

namespace tt::harness {

using censor::AttackNode;
using netsim::TimeUs;

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ok: return "ok";
    case Outcome::handshake_error: return "handshake-error";
    case Outcome::transport_error: return "transport-error";
    case Outcome::integrity_error: return "integrity-error";
    case Outcome::corrupted: return "corrupted";
    case Outcome::closed: return "closed";
  }
  return "?";
}

namespace {

constexpr std::string_view kText =
    "Reports from the provincial meeting describe new rules for local markets and schools. "
    "Residents asked questions about roads, water and the coming winter. ";

Outcome outcome_of(const LayerError& e) {
  switch (e.kind) {
    case ErrorKind::handshake: return Outcome::handshake_error;
    case ErrorKind::transport: return Outcome::transport_error;
    case ErrorKind::integrity: return Outcome::integrity_error;
    case ErrorKind::closed: return Outcome::closed;
    default: return Outcome::transport_error;
  }
}

bool involves(const netsim::FlowKey& k, netsim::Address a) { return k.src_addr == a || k.dst_addr == a; }

struct Label {
  TimeUs time;
  std::string label;
  bool intervention;
};

std::mutex g_model_mu;
std::map<std::string, std::shared_ptr<const transports::TraceModel>> g_models;

Result<std::shared_ptr<const transports::TraceModel>, std::string> trace_for(const std::string& path) {
  std::lock_guard lock(g_model_mu);
  if (auto it = g_models.find(path); it != g_models.end()) return it->second;
  auto m = transports::TraceModel::load(path);
  if (!m) return fail(path + ": " + m.error().message);
  auto shared = std::make_shared<const transports::TraceModel>(std::move(*m));
  g_models.emplace(path, shared);
  return shared;
}

struct TrialEnv {
  const ScenarioConfig& cfg;
  const ValidatedStack& stack;
  std::shared_ptr<const censor::ClassifierModel> model;
  std::shared_ptr<const transports::TraceModel> background;
};

TrialResult run_trial(const TrialEnv& env, std::size_t index, std::uint64_t seed, std::string* event_log) {
  const ScenarioConfig& cfg = env.cfg;
  TrialResult r;
  r.index = index;
  r.seed = seed;

  const LayerSpec* si = env.stack.find(LayerKind::session_init);
  const bool decoy = si != nullptr && si->impl == "decoy";
  const bool deflector = decoy || cfg.topology.deflector;

  netsim::Simulator sim(netsim::Topology::canonical(deflector, cfg.topology.link), seed);
  sim.log().set_enabled(event_log != nullptr);

  auto& client = sim.add_node(netsim::Side::client, kClientAddr);
  auto& proxy = sim.add_node(netsim::Side::destination, kProxyAddr);
  if (deflector) {
    auto& overt = sim.add_node(netsim::Side::destination, kOvertAddr);
    overt.bind_default([](const netsim::Packet&) {});
  }

  censor::CensorPolicy policy = cfg.policy.policy;
  policy.classifier = env.model;
  policy.prober_addrs = StackProber::address_pool(policy.probe_budget + 1);
  censor::Censor censor(std::move(policy));
  StackProber prober(sim, env.stack, derive_seed(seed, "prober"), censor.inspector().policy().probe_timeout_s);
  if (censor.inspector().policy().on(AttackNode::FPR_SEM)) censor.set_prober(&prober);
  if (cfg.topology.censor) {
    if (auto pos = sim.topology().censor_position()) (void)sim.attach_middlebox(*pos, &censor);
  }

  Rng secrets_rng(derive_seed(seed, "secrets"));
  Bytes deflection_key = cfg.deflection_key.empty() ? secrets_rng.bytes(32) : cfg.deflection_key;
  if (deflector) (void)transports::attach_decoy_router(sim, deflection_key, kProxyAddr);

  auto received = std::make_shared<std::uint64_t>(0);
  ServerConfig sc;
  sc.secrets.ticket_master_key = secrets_rng.bytes(32);
  sc.secrets.deflection_key = deflection_key;
  sc.seed = derive_seed(seed, "server");
  if (cfg.traffic.app == "echo") {
    sc.app = echo_app();
  } else {
    sc.app = [received](Channel& ch) {
      auto d = ch.recv();
      if (d && ch.peer() == kClientAddr) *received += d->size();
    };
  }
  Server server(env.stack, proxy, sc);

  TimeUs background_end = 0;
  if (env.background && cfg.background.flows > 0) {
    auto flows = gen_background(*env.background, cfg.background.flows, cfg.background.packets,
                                cfg.background.spread_s, derive_seed(seed, "background"));
    for (const auto& f : flows) {
      TimeUs end = f.start;
      for (TimeUs g : f.gaps) end += g;
      background_end = std::max(background_end, end);
    }
    schedule_background(sim, flows);
    r.background_flows = flows.size();
  }

  std::uint64_t lifetime = 3600;
  if (si != nullptr && si->impl == "ticket")
    if (auto it = si->params.find("lifetime"); it != si->params.end()) lifetime = std::stoull(it->second);

  const TimeUs timeout = netsim::from_seconds(cfg.traffic.timeout_s);
  Rng payload_rng(derive_seed(seed, "payload"));
  TimeUs active = 0;
  std::uint64_t expected_sink = 0;
  for (std::size_t s = 0; s < cfg.traffic.sessions && r.outcome == Outcome::ok; ++s) {
    if (s > 0) sim.run_until(sim.now() + netsim::from_seconds(cfg.traffic.session_gap_s));
    ClientConfig cc;
    cc.server = decoy ? kOvertAddr : kProxyAddr;
    cc.seed = derive_seed(seed, "client-" + std::to_string(s));
    cc.secrets.deflection_key = deflection_key;
    if (si != nullptr && si->impl == "ticket")
      cc.secrets.ticket =
          transports::ticket_authority(server.state(), sc.secrets.ticket_master_key, lifetime).issue(sim.now());

    const Bytes payload = make_payload(cfg.traffic, payload_rng);
    const TimeUs t0 = sim.now();
    auto ch = open_channel(env.stack, client, cc);
    if (!ch) {
      r.outcome = outcome_of(ch.error());
      r.error = ch.error().message();
      break;
    }
    (void)(*ch)->send(payload);
    if (cfg.traffic.app == "echo") {
      auto got = recv_exact(**ch, sim, payload.size(), timeout);
      if (!got) {
        r.outcome = outcome_of(got.error());
        r.error = got.error().message();
      } else if (*got != payload) {
        r.outcome = Outcome::corrupted;
        r.error = "echoed bytes differ from the bytes sent";
      }
    } else {
      expected_sink += payload.size();
      auto flushed = flush(**ch, sim, timeout);
      if (!flushed) {
        r.outcome = outcome_of(flushed.error());
        r.error = flushed.error().message();
      } else {
        sim.run_while([&] { return *received < expected_sink; }, sim.now() + netsim::from_seconds(5));
        if (*received != expected_sink) {
          r.outcome = Outcome::corrupted;
          r.error = "server received " + std::to_string(*received) + " of " + std::to_string(expected_sink) +
                    " bytes";
          for (Channel* c : server.connections())
            if (c->peer() == kClientAddr && c->error()) {
              r.outcome = outcome_of(*c->error());
              r.error = "server side: " + c->error()->message();
            }
        }
      }
    }
    if (r.outcome == Outcome::ok) {
      r.bytes_delivered += payload.size();
      active += sim.now() - t0;
    }
    (*ch)->close();
  }
  // Let background flows and pending probes play out.
  sim.run_until(std::max(sim.now(), background_end) + netsim::from_seconds(1));
  const double probe_wait = censor.inspector().policy().probe_timeout_s + 1;
  if (!prober.records().empty()) sim.run_until(sim.now() + netsim::from_seconds(probe_wait));

  r.duration_s = netsim::to_seconds(active);
  r.goodput_bytes_per_s = active > 0 ? static_cast<double>(r.bytes_delivered) / netsim::to_seconds(active) : 0;

  const auto& insp = censor.inspector();
  const netsim::Address covert_server = decoy ? kOvertAddr : kProxyAddr;
  std::vector<Label> labels;
  for (const auto& d : insp.detections()) {
    const bool endpoint_level = d.flow.src_addr == 0;
    if (endpoint_level ? (d.flow.dst_addr == kProxyAddr || d.flow.dst_addr == covert_server)
                       : involves(d.flow, kClientAddr))
      labels.push_back({d.time, d.label, false});
  }
  for (const auto& h : insp.history())
    if (h.type != censor::Verdict::Type::allow && h.type != censor::Verdict::Type::flag &&
        involves(h.flow, kClientAddr))
      labels.push_back({h.time, h.node, true});
  std::stable_sort(labels.begin(), labels.end(), [](const Label& a, const Label& b) { return a.time < b.time; });

  std::set<AttackNode> judged;
  if (cfg.suite) {
    judged.insert(*cfg.suite);
  } else {
    judged = insp.policy().enabled;
  }
  bool judged_intervention = false;
  for (const auto& l : labels) {
    if (std::find(r.labels.begin(), r.labels.end(), l.label) == r.labels.end()) r.labels.push_back(l.label);
    auto n = censor::node_of(l.label);
    if (!n || !judged.count(*n)) continue;
    if (!r.detected) {
      r.detected = true;
      r.node = l.label;
    }
    if (l.intervention) judged_intervention = true;
  }
  for (const auto& [key, flow] : insp.flows().flows()) {
    if (involves(key, kClientAddr)) ++r.covert_flows;
    if (!is_background_client(key.src_addr)) continue;
    if (!flow.flags.empty() || !flow.interventions.empty()) ++r.background_flagged;
    if (flow.dropped + flow.resets + flow.tampered > 0) ++r.background_blocked;
  }
  for (const auto& p : prober.records()) {
    ++r.probes;
    if (p.confirmed) ++r.probes_confirmed;
    r.probe_server_bytes += p.server_bytes;
  }

  const bool semantic_suite = cfg.suite == AttackNode::COR_SEM;
  r.censored = r.outcome != Outcome::ok || (judged_intervention && !semantic_suite);
  r.passed = semantic_suite ? r.outcome == Outcome::ok : (!r.detected && !r.censored);
  if (event_log) *event_log = sim.log().csv();
  return r;
}

std::string describe_expectation(const ExpectConfig& e) {
  std::string out;
  if (e.detected) out = *e.detected ? "detected" : "undetected";
  if (e.node) out += (out.empty() ? "" : ", ") + std::string("node ") + *e.node;
  if (!out.empty() && e.tolerance > 0) out += " (tolerance " + std::to_string(e.tolerance) + ")";
  return out;
}

bool node_matches(const std::string& seen, const std::string& want) {
  if (seen == want) return true;
  if (want.find('-') != std::string::npos) return false;
  auto n = censor::node_of(seen);
  return n && censor::label(*n) == want;
}

}  // namespace

Bytes make_payload(const TrafficConfig& traffic, Rng& rng) {
  Bytes out;
  if (traffic.content == "text") {
    out.reserve(traffic.payload_bytes);
    while (out.size() < traffic.payload_bytes) out.insert(out.end(), kText.begin(), kText.end());
    out.resize(traffic.payload_bytes);
  } else {
    out = rng.bytes(traffic.payload_bytes);
  }
  if (!traffic.keyword.empty()) {
    const std::size_t step = traffic.keyword_every;
    for (std::size_t at = traffic.keyword_offset; at + traffic.keyword.size() <= out.size();) {
      std::copy(traffic.keyword.begin(), traffic.keyword.end(), out.begin() + static_cast<std::ptrdiff_t>(at));
      if (step == 0) break;
      at += step;
    }
  }
  return out;
}

Result<std::shared_ptr<const censor::ClassifierModel>, std::string> classifier_for(const PolicyConfig& policy) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const censor::ClassifierModel>> cache;
  if (policy.classifier.empty()) return std::shared_ptr<const censor::ClassifierModel>();
  std::string key = std::to_string(policy.training_packets);
  for (const auto& c : policy.classifier) key += "|" + c.label + "=" + c.trace;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  std::vector<censor::LabeledSamples> data;
  for (const auto& c : policy.classifier) {
    auto model = trace_for(c.trace);
    if (!model) return fail(model.error());
    auto sampler = (*model)->sampler();
    Rng rng(derive_seed(0x7472616974ULL, c.label));
    censor::LabeledSamples s;
    s.label = c.label;
    for (std::size_t i = 0; i < policy.training_packets; ++i) {
      s.lengths.push_back(sampler.length(rng));
      s.iats_ms.push_back(sampler.gap_ms(rng));
    }
    data.push_back(std::move(s));
  }
  try {
    auto model = std::make_shared<const censor::ClassifierModel>(censor::ClassifierModel::train(data));
    if (!model->class_index(policy.policy.blocked_class))
      return fail("blocked class '" + policy.policy.blocked_class + "' is not among the classifier labels");
    std::lock_guard lock(mu);
    cache.emplace(key, model);
    return std::shared_ptr<const censor::ClassifierModel>(model);
  } catch (const std::invalid_argument& e) {
    return fail(std::string("classifier: ") + e.what());
  }
}

Result<ScenarioRun, std::string> run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  const StackDescriptor& desc = opts.stack ? *opts.stack : cfg.stack;
  auto stack = validate_builtin(desc);
  if (!stack) return fail("stack " + desc.name + ": " + stack.error().message());
  auto model = classifier_for(cfg.policy);
  if (!model) return fail(model.error());
  std::shared_ptr<const transports::TraceModel> background;
  if (cfg.background.flows > 0) {
    auto m = trace_for(cfg.background.trace);
    if (!m) return fail(m.error());
    background = *m;
  }

  ScenarioRun run;
  MetricsReport& rep = run.report;
  rep.scenario = cfg.name;
  rep.stack = desc.name;
  rep.layers = desc.str();
  rep.suite = cfg.suite;
  rep.seed = opts.seed.value_or(cfg.seed.value_or(0));
  const std::size_t trials = opts.trials.value_or(cfg.trials);

  const TrialEnv env{cfg, *stack, *model, background};
  for (std::size_t i = 0; i < trials; ++i) {
    std::string* log = (i == 0 && opts.keep_event_log) ? &run.event_log_csv : nullptr;
    rep.trials.push_back(run_trial(env, i, derive_seed(rep.seed, i), log));
  }

  std::size_t detected = 0, passed = 0, bg = 0, flagged = 0, blocked = 0;
  for (const auto& t : rep.trials) {
    detected += t.detected;
    passed += t.passed;
    bg += t.background_flows;
    flagged += t.background_flagged;
    blocked += t.background_blocked;
  }
  const double n = static_cast<double>(rep.trials.size());
  if (!rep.trials.empty()) {
    rep.tpr = static_cast<double>(detected) / n;
    rep.pass_rate = static_cast<double>(passed) / n;
  }
  if (bg > 0) {
    rep.fpr = static_cast<double>(flagged) / static_cast<double>(bg);
    rep.collateral = static_cast<double>(blocked) / static_cast<double>(bg);
  }

  rep.expectation = describe_expectation(cfg.expect);
  if (cfg.expect.detected && rep.tpr) {
    const double rate = *rep.tpr;
    rep.expectation_met = *cfg.expect.detected ? rate >= 1 - cfg.expect.tolerance - 1e-12
                                               : rate <= cfg.expect.tolerance + 1e-12;
  }
  if (cfg.expect.node)
    for (const auto& t : rep.trials)
      if (t.detected && !node_matches(t.node, *cfg.expect.node)) rep.expectation_met = false;
  return run;
}

}  // namespace tt::harness
