#include "tt/censor/inspect.hpp"

#include <algorithm>
#include <stdexcept>

#include "tt/util/stats.hpp"

namespace tt::censor {

using netsim::Packet;
using netsim::PacketKind;
using netsim::TimeUs;

std::string_view to_string(Verdict::Type t) {
  switch (t) {
    case Verdict::Type::allow: return "allow";
    case Verdict::Type::flag: return "flag";
    case Verdict::Type::drop: return "drop";
    case Verdict::Type::inject_rst: return "inject-rst";
    case Verdict::Type::tamper: return "tamper";
    case Verdict::Type::throttle: return "throttle";
  }
  return "?";
}

Bytes tamper_page(std::size_t size) {
  static constexpr std::string_view kPage =
      "HTTP/1.1 404 Not Found\r\nContent-Type: text/html\r\nConnection: close\r\n\r\n"
      "<html><body><h1>404 Not Found</h1></body></html>";
  Bytes out(size, ' ');
  std::copy_n(kPage.begin(), std::min(size, kPage.size()), out.begin());
  return out;
}

Inspector::Inspector(CensorPolicy policy) : policy_(std::move(policy)), flows_(policy_.reassembly_limit) {
  if (auto why = policy_.validate()) throw std::invalid_argument(*why);
  for (const auto& re : policy_.regexes) regexes_.emplace_back(re, boost::regex::perl);
  for (const auto& kw : policy_.keywords) longest_keyword_ = std::max(longest_keyword_, kw.size());
  if (policy_.classifier) target_class_ = policy_.classifier->class_index(policy_.blocked_class);
  if (policy_.on(AttackNode::BLK_ROU))
    for (const auto& b : policy_.blocked_tuples) blocks_.apply_permanent(b, "BLK.ROU");
}

TimeUs Inspector::block_duration() const { return netsim::from_seconds(policy_.block_duration_s); }

std::vector<ProbeRequest> Inspector::take_probe_requests() { return std::exchange(pending_probes_, {}); }

void Inspector::probe_finished(const ProbeRequest& req, bool confirmed, TimeUs now) {
  probes_.push_back({req, now, confirmed});
  if (!confirmed) return;
  blocks_.apply({std::nullopt, req.addr, req.port}, now, block_duration(), "FPR.SEM");
  detections_.push_back({netsim::FlowKey{0, 0, req.addr, req.port}, now, "FPR.SEM"});
}

void Inspector::fingerprint(FlowState& flow, const std::string& label, TimeUs now, std::vector<Verdict>& out) {
  if (flow.has_flag(label)) return;
  flow.add_flag(label);
  detections_.push_back({flow.key, now, label});

  if (policy_.on(AttackNode::FPR_SEM)) {
    const auto endpoint = std::make_pair(flow.key.dst_addr, flow.key.dst_port);
    if (!probed_.count(endpoint) && probes_issued_ < policy_.probe_budget) {
      probed_.insert(endpoint);
      ++probes_issued_;
      pending_probes_.push_back({endpoint.first, endpoint.second, now, label});
    }
  }

  const BlockPattern pattern{flow.key.src_addr, flow.key.dst_addr, flow.key.dst_port};
  switch (policy_.fingerprint_action) {
    case FingerprintAction::flag:
      out.push_back(Verdict::of(Verdict::Type::flag, label));
      return;
    case FingerprintAction::rst_block:
      blocks_.apply(pattern, now, block_duration(), label);
      [[fallthrough]];
    case FingerprintAction::rst:
      out.push_back(Verdict::of(Verdict::Type::inject_rst, label));
      return;
    case FingerprintAction::drop_block:
      blocks_.apply(pattern, now, block_duration(), label);
      out.push_back(Verdict::of(Verdict::Type::drop, label));
      return;
  }
}

void Inspector::check_content(FlowState& flow, bool forward, const Packet& p, TimeUs now, std::vector<Verdict>& out) {
  StreamReassembler& stream = forward ? flow.forward_stream : flow.reverse_stream;
  const std::size_t fresh = stream.add(p.seq, p.payload);
  if (fresh > 0) {
    const std::string& w = stream.window();
    const std::size_t tail = std::min(w.size(), fresh);
    if (!policy_.keywords.empty()) {
      const std::size_t from = w.size() - std::min(w.size(), tail + longest_keyword_ - 1);
      const std::string_view region(w.data() + from, w.size() - from);
      for (const auto& kw : policy_.keywords)
        if (region.find(kw) != std::string_view::npos) {
          fingerprint(flow, "FPR.CON", now, out);
          break;
        }
    }
    if (!regexes_.empty()) {
      const std::size_t from = w.size() - std::min(w.size(), tail + policy_.regex_overlap);
      for (const auto& re : regexes_)
        if (boost::regex_search(w.begin() + static_cast<std::ptrdiff_t>(from), w.end(), re)) {
          fingerprint(flow, "FPR.CON", now, out);
          break;
        }
    }
  }
  if (policy_.entropy_threshold && !flow.entropy_checked) {
    flow.entropy_checked = true;
    if (p.payload.size() >= policy_.entropy_min_bytes) {
      const double h = shannon_entropy(p.payload);
      flow.first_payload_entropy = h;
      if (h > *policy_.entropy_threshold) fingerprint(flow, "FPR.CON-entropy", now, out);
    }
  }
}

void Inspector::check_classifier(FlowState& flow, const Packet& p, TimeUs now, std::vector<Verdict>& out) {
  const ClassifierModel& model = *policy_.classifier;
  const std::size_t classes = model.classes().size();
  if (flow.length_scores.empty()) {
    flow.length_scores.assign(classes, 0);
    flow.iat_scores.assign(classes, 0);
  }
  const double length = static_cast<double>(p.payload.size());
  for (std::size_t c = 0; c < classes; ++c) flow.length_scores[c] += model.length_log_prob(c, length);
  ++flow.length_observations;
  if (flow.last_payload_time) {
    const double iat = netsim::to_ms(now - *flow.last_payload_time);
    for (std::size_t c = 0; c < classes; ++c) flow.iat_scores[c] += model.iat_log_prob(c, iat);
    ++flow.iat_observations;
  }
  if (flow.payload_packets < policy_.classifier_min_packets) return;
  if (policy_.on(AttackNode::FPR_LEN) && score_margin(flow.length_scores, *target_class_) >= policy_.classifier_margin)
    fingerprint(flow, "FPR.LEN", now, out);
  if (policy_.on(AttackNode::FPR_TIM) && score_margin(flow.iat_scores, *target_class_) >= policy_.classifier_margin)
    fingerprint(flow, "FPR.TIM", now, out);
}

Verdict Inspector::inspect(const Packet& p, const PacketContext& ctx) {
  const TimeUs now = ctx.now;
  for (netsim::Address a : policy_.prober_addrs)
    if (p.key.src_addr == a || p.key.dst_addr == a) return {};

  bool forward = true;
  FlowState& flow = flows_.lookup(p.key, now, forward);
  ++flow.packets;
  const bool has_payload = !p.payload.empty();
  if (has_payload) ++flow.payload_packets;

  std::vector<Verdict> found;

  if (auto origin = blocks_.blocked_by(p.key, now)) {
    found.push_back(Verdict::of(Verdict::Type::drop, origin->empty() ? std::string("BLK.ROU") : *origin));
  } else if (policy_.on(AttackNode::COR_ROU) &&
             std::any_of(policy_.blackholed.begin(), policy_.blackholed.end(), [&](netsim::Address a) {
               return p.key.dst_addr == a || p.key.src_addr == a;
             })) {
    found.push_back(Verdict::of(Verdict::Type::drop, "COR.ROU"));
  }

  if (found.empty()) {
    if (policy_.on(AttackNode::FPR_ROU)) {
      const bool port_hit =
          std::find(policy_.suspect_ports.begin(), policy_.suspect_ports.end(), flow.key.dst_port) !=
          policy_.suspect_ports.end();
      const bool addr_hit = std::find(policy_.suspect_addrs.begin(), policy_.suspect_addrs.end(), flow.key.dst_addr) !=
                            policy_.suspect_addrs.end();
      if (port_hit || addr_hit) fingerprint(flow, "FPR.ROU", now, found);
    }

    if (p.kind == PacketKind::rst) {
      // An RST that expires before reaching its endpoint cannot end the
      // connection; a ttl-aware censor keeps tracking the flow.
      const bool reaches = static_cast<std::size_t>(std::max(p.ttl, 0)) >= ctx.hops_remaining + 1;
      if (!policy_.ttl_aware_rst || reaches) {
        flow.torn_down = true;
        flow.forward_stream.reset();
        flow.reverse_stream.reset();
      }
    }

    if (policy_.on(AttackNode::COR_SEM) && !flow.torn_down && p.kind != PacketKind::rst &&
        std::any_of(policy_.rst_targets.begin(), policy_.rst_targets.end(),
                    [&](const AddressPort& t) { return t.matches_either_end(flow.key); })) {
      found.push_back(Verdict::of(Verdict::Type::inject_rst, "COR.SEM"));
    }

    if (policy_.on(AttackNode::FPR_CON) && !flow.torn_down && has_payload) check_content(flow, forward, p, now, found);

    if ((policy_.on(AttackNode::FPR_LEN) || policy_.on(AttackNode::FPR_TIM)) && policy_.classifier && target_class_ &&
        !flow.torn_down && has_payload)
      check_classifier(flow, p, now, found);

    if (policy_.on(AttackNode::COR_CON) && has_payload && (!forward || policy_.tamper_requests)) {
      const std::string_view body(reinterpret_cast<const char*>(p.payload.data()), p.payload.size());
      for (const auto& pat : policy_.tamper_patterns)
        if (body.find(pat) != std::string_view::npos) {
          Verdict v = Verdict::of(Verdict::Type::tamper, "COR.CON");
          v.replacement = tamper_page(p.payload.size());
          found.push_back(std::move(v));
          break;
        }
    }

    if (policy_.on(AttackNode::DEG_PER) && policy_.throttle_factor > 0 &&
        std::any_of(policy_.throttle_targets.begin(), policy_.throttle_targets.end(),
                    [&](const AddressPort& t) { return t.matches_either_end(flow.key); })) {
      TimeUs& free_at = forward ? flow.throttle_free_forward : flow.throttle_free_reverse;
      const double rate = ctx.bandwidth_bytes_per_s * (1 - policy_.throttle_factor);
      const TimeUs cost = netsim::from_seconds(static_cast<double>(p.wire_size()) / rate);
      const TimeUs release = std::max(now, free_at);
      free_at = release + cost;
      Verdict v = Verdict::of(Verdict::Type::throttle, "DEG.PER");
      v.release_at = release;
      found.push_back(std::move(v));
    }
  }
  if (has_payload) flow.last_payload_time = now;

  Verdict chosen;
  for (auto& v : found)
    if (v.affects_traffic()) {
      chosen = std::move(v);
      break;
    }
  if (chosen.type == Verdict::Type::allow)
    for (auto& v : found)
      if (v.type == Verdict::Type::flag) {
        chosen = std::move(v);
        break;
      }
  if (chosen.type == Verdict::Type::inject_rst) {
    flow.torn_down = true;
    flow.forward_stream.reset();
    flow.reverse_stream.reset();
  }
  if (chosen.affects_traffic() &&
      std::find(flow.interventions.begin(), flow.interventions.end(), chosen.node) == flow.interventions.end())
    flow.interventions.push_back(chosen.node);
  if (chosen.type != Verdict::Type::allow) history_.push_back({p.id, flow.key, now, chosen.type, chosen.node});
  switch (chosen.type) {
    case Verdict::Type::drop: ++flow.dropped; break;
    case Verdict::Type::inject_rst: ++flow.resets; break;
    case Verdict::Type::tamper: ++flow.tampered; break;
    case Verdict::Type::throttle: ++flow.throttled; break;
    default: break;
  }
  return chosen;
}

}  // namespace tt::censor
