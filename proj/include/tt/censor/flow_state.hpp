#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tt/censor/policy.hpp"
#include "tt/netsim/types.hpp"

namespace tt::censor {

// In-order reconstruction of one direction of a flow from sequence offsets.
// The first copy of a byte wins; retransmissions never overwrite it.
class StreamReassembler {
 public:
  explicit StreamReassembler(std::size_t window_limit = 64 * 1024) : limit_(window_limit) {}

  // Returns how many bytes became newly contiguous.
  std::size_t add(std::uint32_t seq, ByteView payload);
  // The last `limit` contiguous bytes.
  const std::string& window() const { return window_; }
  std::uint64_t delivered() const { return delivered_; }
  std::size_t pending_segments() const { return pending_.size(); }
  void reset();

 private:
  void append(ByteView data);

  std::size_t limit_;
  bool synced_ = false;
  std::uint32_t next_ = 0;
  std::uint64_t delivered_ = 0;
  std::map<std::uint32_t, Bytes> pending_;
  std::string window_;
};

struct FlowState {
  netsim::FlowKey key;  // oriented as first seen: src is the initiator
  netsim::TimeUs first_seen = 0;
  std::uint64_t packets = 0;
  std::uint64_t payload_packets = 0;
  bool torn_down = false;

  StreamReassembler forward_stream;
  StreamReassembler reverse_stream;

  bool entropy_checked = false;
  std::optional<double> first_payload_entropy;

  std::optional<netsim::TimeUs> last_payload_time;
  std::vector<double> length_scores;  // per classifier class
  std::vector<double> iat_scores;
  std::size_t length_observations = 0;
  std::size_t iat_observations = 0;

  netsim::TimeUs throttle_free_forward = 0;
  netsim::TimeUs throttle_free_reverse = 0;

  std::uint64_t dropped = 0;
  std::uint64_t resets = 0;
  std::uint64_t tampered = 0;
  std::uint64_t throttled = 0;

  std::vector<std::string> flags;         // first occurrence order
  std::vector<std::string> interventions;  // nodes that affected traffic, first occurrence order

  bool has_flag(const std::string& f) const;
  void add_flag(const std::string& f);
};

class FlowTable {
 public:
  explicit FlowTable(std::size_t reassembly_limit = 64 * 1024) : limit_(reassembly_limit) {}

  // Finds the flow for a packet in either orientation, creating it when new.
  // `forward` tells whether the packet travels in the flow's orientation.
  FlowState& lookup(const netsim::FlowKey& key, netsim::TimeUs now, bool& forward);
  const FlowState* find(const netsim::FlowKey& key) const;
  const std::map<netsim::FlowKey, FlowState>& flows() const { return flows_; }
  std::size_t size() const { return flows_.size(); }

 private:
  std::size_t limit_;
  std::map<netsim::FlowKey, FlowState> flows_;
};

class BlockTable {
 public:
  // Extends an existing identical block to the later expiry.
  // `origin` names the node that asked for the block.
  void apply(const BlockPattern& pattern, netsim::TimeUs now, netsim::TimeUs duration, std::string origin = "");
  void apply_permanent(const BlockPattern& pattern, std::string origin = "");
  // Origin of some matching block, if any. Expired entries are
  // dropped as a side effect.
  std::optional<std::string> blocked_by(const netsim::FlowKey& key, netsim::TimeUs now);
  bool is_blocked(const netsim::FlowKey& key, netsim::TimeUs now) { return blocked_by(key, now).has_value(); }
  std::optional<netsim::TimeUs> expiry(const BlockPattern& pattern) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    netsim::TimeUs until;
    std::string origin;
  };
  std::map<BlockPattern, Entry> entries_;
};

}  // namespace tt::censor
