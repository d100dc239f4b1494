#include "tt/censor/policy.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/regex.hpp>
#include <fstream>
#include <sstream>

namespace tt::censor {

std::string_view label(AttackNode n) {
  switch (n) {
    case AttackNode::DEG_PER: return "DEG.PER";
    case AttackNode::BLK_ROU: return "BLK.ROU";
    case AttackNode::COR_ROU: return "COR.ROU";
    case AttackNode::COR_CON: return "COR.CON";
    case AttackNode::COR_SEM: return "COR.SEM";
    case AttackNode::FPR_ROU: return "FPR.ROU";
    case AttackNode::FPR_CON: return "FPR.CON";
    case AttackNode::FPR_LEN: return "FPR.LEN";
    case AttackNode::FPR_TIM: return "FPR.TIM";
    case AttackNode::FPR_SEM: return "FPR.SEM";
  }
  return "?";
}

std::optional<AttackNode> parse_node(std::string_view s) {
  for (AttackNode n : kAllNodes)
    if (label(n) == s) return n;
  return std::nullopt;
}

std::optional<AttackNode> node_of(std::string_view detection_label) {
  return parse_node(detection_label.substr(0, detection_label.find('-')));
}

bool is_fingerprinting(AttackNode n) {
  return n == AttackNode::FPR_ROU || n == AttackNode::FPR_CON || n == AttackNode::FPR_LEN ||
         n == AttackNode::FPR_TIM || n == AttackNode::FPR_SEM;
}

std::optional<FingerprintAction> parse_fingerprint_action(std::string_view s) {
  if (s == "flag") return FingerprintAction::flag;
  if (s == "rst") return FingerprintAction::rst;
  if (s == "rst_block") return FingerprintAction::rst_block;
  if (s == "drop_block") return FingerprintAction::drop_block;
  return std::nullopt;
}

std::string_view to_string(FingerprintAction a) {
  switch (a) {
    case FingerprintAction::flag: return "flag";
    case FingerprintAction::rst: return "rst";
    case FingerprintAction::rst_block: return "rst_block";
    case FingerprintAction::drop_block: return "drop_block";
  }
  return "?";
}

bool BlockPattern::matches(const netsim::FlowKey& k) const {
  const bool fwd = k.dst_addr == dst && (!src || k.src_addr == *src) && (!port || k.dst_port == *port);
  const bool rev = k.src_addr == dst && (!src || k.dst_addr == *src) && (!port || k.src_port == *port);
  return fwd || rev;
}

bool AddressPort::matches_either_end(const netsim::FlowKey& k) const {
  return (k.dst_addr == addr && (!port || k.dst_port == *port)) ||
         (k.src_addr == addr && (!port || k.src_port == *port));
}

std::optional<std::string> CensorPolicy::validate() const {
  if (!(block_duration_s > 0)) return "block duration must be positive";
  if (!(throttle_factor >= 0 && throttle_factor < 1)) return "throttle factor must lie in [0, 1)";
  if (entropy_threshold && (*entropy_threshold < 0 || *entropy_threshold > 8))
    return "entropy threshold must lie in [0, 8]";
  if (!(classifier_margin >= 0)) return "classifier margin must be non-negative";
  if (!(probe_timeout_s > 0)) return "probe timeout must be positive";
  if (reassembly_limit == 0) return "reassembly limit must be positive";
  for (const auto& kw : keywords)
    if (kw.empty()) return "empty keyword";
  for (const auto& re : regexes) {
    try {
      boost::regex compiled(re);
    } catch (const boost::regex_error& e) {
      return "bad content regex '" + re + "': " + e.what();
    }
  }
  return std::nullopt;
}

std::vector<std::string> parse_rules(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    boost::algorithm::trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

Result<std::vector<std::string>, std::string> load_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return fail("cannot open rule file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rules(ss.str());
}

}  // namespace tt::censor
