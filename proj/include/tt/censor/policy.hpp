#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tt/netsim/types.hpp"
#include "tt/util/result.hpp"

namespace tt::censor {

class ClassifierModel;

// Attack nodes, in the column order used by the coverage matrix.
enum class AttackNode { DEG_PER, BLK_ROU, COR_ROU, COR_CON, COR_SEM, FPR_ROU, FPR_CON, FPR_LEN, FPR_TIM, FPR_SEM };

inline constexpr AttackNode kAllNodes[] = {
    AttackNode::DEG_PER, AttackNode::BLK_ROU, AttackNode::COR_ROU, AttackNode::COR_CON, AttackNode::COR_SEM,
    AttackNode::FPR_ROU, AttackNode::FPR_CON, AttackNode::FPR_LEN, AttackNode::FPR_TIM, AttackNode::FPR_SEM,
};

std::string_view label(AttackNode n);  // "FPR.CON" etc.
std::optional<AttackNode> parse_node(std::string_view s);
bool is_fingerprinting(AttackNode n);
// Node behind a detection label: "FPR.CON-entropy" -> FPR.CON.
std::optional<AttackNode> node_of(std::string_view detection_label);

// What the censor does once a fingerprinting node flags a flow.
enum class FingerprintAction { flag, rst, rst_block, drop_block };
std::optional<FingerprintAction> parse_fingerprint_action(std::string_view s);
std::string_view to_string(FingerprintAction a);

// Matches packets between `src` (any when unset) and `dst`, optionally only
// on `port` at the `dst` side. Applies to both directions of travel.
struct BlockPattern {
  std::optional<netsim::Address> src;
  netsim::Address dst = 0;
  std::optional<std::uint16_t> port;

  bool matches(const netsim::FlowKey& key) const;
  auto operator<=>(const BlockPattern&) const = default;
};

struct AddressPort {
  netsim::Address addr = 0;
  std::optional<std::uint16_t> port;
  bool matches_either_end(const netsim::FlowKey& key) const;
  auto operator<=>(const AddressPort&) const = default;
};

inline constexpr double kThrottlePresetHigh = 0.77;
inline constexpr double kThrottlePresetLow = 0.69;

struct CensorPolicy {
  std::set<AttackNode> enabled;

  // FPR.CON
  std::vector<std::string> keywords;
  std::vector<std::string> regexes;
  std::optional<double> entropy_threshold;  // entropy detector off when unset
  std::size_t entropy_min_bytes = 64;
  std::size_t reassembly_limit = 64 * 1024;
  std::size_t regex_overlap = 2048;

  // FPR.LEN / FPR.TIM
  std::shared_ptr<const ClassifierModel> classifier;
  std::string blocked_class = "tunnel";
  double classifier_margin = 2.0;  // nats
  std::size_t classifier_min_packets = 20;

  // FPR.ROU
  std::vector<std::uint16_t> suspect_ports;
  std::vector<netsim::Address> suspect_addrs;

  // FPR.SEM
  std::size_t probe_budget = 10;
  double probe_timeout_s = 10;
  std::vector<netsim::Address> prober_addrs;  // never inspected

  // BLK.ROU / COR.ROU
  std::vector<BlockPattern> blocked_tuples;  // permanent
  std::vector<netsim::Address> blackholed;

  // COR.CON
  std::vector<std::string> tamper_patterns;
  bool tamper_requests = false;  // responses only by default

  // COR.SEM
  std::vector<AddressPort> rst_targets;
  bool ttl_aware_rst = false;

  // DEG.PER
  std::vector<AddressPort> throttle_targets;
  double throttle_factor = kThrottlePresetHigh;

  double block_duration_s = 90;
  FingerprintAction fingerprint_action = FingerprintAction::rst_block;

  bool on(AttackNode n) const { return enabled.count(n) != 0; }
  // Empty when the policy is consistent, otherwise the reason.
  std::optional<std::string> validate() const;
};

// One rule per line; blank lines and `#` comments are skipped.
Result<std::vector<std::string>, std::string> load_rule_file(const std::string& path);
std::vector<std::string> parse_rules(std::string_view text);

}  // namespace tt::censor
