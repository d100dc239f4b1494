#pragma once

#include <boost/regex.hpp>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tt/censor/classifier.hpp"
#include "tt/censor/flow_state.hpp"
#include "tt/censor/policy.hpp"

namespace tt::censor {

struct Verdict {
  enum class Type { allow, flag, drop, inject_rst, tamper, throttle };

  Type type = Type::allow;
  std::string node;  // e.g. "BLK.ROU", or "FPR.CON-entropy" for a sub-detector
  Bytes replacement;               // tamper
  netsim::TimeUs release_at = 0;   // throttle

  static Verdict of(Type t, std::string node) {
    Verdict v;
    v.type = t;
    v.node = std::move(node);
    return v;
  }
  bool affects_traffic() const { return type != Type::allow && type != Type::flag; }
};

std::string_view to_string(Verdict::Type t);

struct PacketContext {
  netsim::TimeUs now = 0;
  // Hops the packet still has to cross, this one included.
  std::size_t hops_remaining = 1;
  double bandwidth_bytes_per_s = 1.25e6;  // outgoing link
};

struct ProbeRequest {
  netsim::Address addr = 0;
  std::uint16_t port = 0;
  netsim::TimeUs time = 0;
  std::string trigger;
};

struct ProbeRecord {
  ProbeRequest request;
  netsim::TimeUs finished = 0;
  bool confirmed = false;
};

struct Detection {
  netsim::FlowKey flow;
  netsim::TimeUs time = 0;
  std::string label;
};

struct VerdictRecord {
  std::uint64_t packet_id = 0;
  netsim::FlowKey flow;  // as oriented in the flow table
  netsim::TimeUs time = 0;
  Verdict::Type type = Verdict::Type::allow;
  std::string node;
};

// Decides what to do with each packet crossing the censor. All state the
// censor keeps lives here so a run can be inspected afterwards.
class Inspector {
 public:
  // Throws std::invalid_argument when the policy does not validate.
  explicit Inspector(CensorPolicy policy);

  Verdict inspect(const netsim::Packet& packet, const PacketContext& ctx);

  // Reports the outcome of a probe handed out by take_probe_requests().
  void probe_finished(const ProbeRequest& req, bool confirmed, netsim::TimeUs now);
  std::vector<ProbeRequest> take_probe_requests();

  const CensorPolicy& policy() const { return policy_; }
  const FlowTable& flows() const { return flows_; }
  BlockTable& blocks() { return blocks_; }
  const std::vector<Detection>& detections() const { return detections_; }
  const std::vector<ProbeRecord>& probes() const { return probes_; }
  const std::vector<VerdictRecord>& history() const { return history_; }
  std::size_t probes_issued() const { return probes_issued_; }

 private:
  void fingerprint(FlowState& flow, const std::string& label, netsim::TimeUs now, std::vector<Verdict>& out);
  void check_content(FlowState& flow, bool forward, const netsim::Packet& p, netsim::TimeUs now,
                     std::vector<Verdict>& out);
  void check_classifier(FlowState& flow, const netsim::Packet& p, netsim::TimeUs now, std::vector<Verdict>& out);
  netsim::TimeUs block_duration() const;

  CensorPolicy policy_;
  std::vector<boost::regex> regexes_;
  std::size_t longest_keyword_ = 0;
  std::optional<std::size_t> target_class_;

  FlowTable flows_;
  BlockTable blocks_;
  std::vector<Detection> detections_;
  std::vector<ProbeRequest> pending_probes_;
  std::set<std::pair<netsim::Address, std::uint16_t>> probed_;
  std::size_t probes_issued_ = 0;
  std::vector<ProbeRecord> probes_;
  std::vector<VerdictRecord> history_;
};

// Response body used when tampering: a 404 page padded or cut to `size`.
Bytes tamper_page(std::size_t size);

}  // namespace tt::censor
