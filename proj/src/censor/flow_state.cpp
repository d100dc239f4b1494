#include "tt/censor/flow_state.hpp"

#include <algorithm>
#include <limits>

namespace tt::censor {

namespace {

// Signed distance from b to a in 32-bit sequence space.
std::int64_t seq_diff(std::uint32_t a, std::uint32_t b) { return static_cast<std::int32_t>(a - b); }

}  // namespace

void StreamReassembler::reset() {
  synced_ = false;
  next_ = 0;
  pending_.clear();
  window_.clear();
}

void StreamReassembler::append(ByteView data) {
  window_.append(reinterpret_cast<const char*>(data.data()), data.size());
  if (window_.size() > limit_) window_.erase(0, window_.size() - limit_);
  next_ += static_cast<std::uint32_t>(data.size());
  delivered_ += data.size();
}

std::size_t StreamReassembler::add(std::uint32_t seq, ByteView payload) {
  if (payload.empty()) return 0;
  if (!synced_) {
    synced_ = true;
    next_ = seq;
  }
  const std::uint64_t before = delivered_;
  const std::int64_t d = seq_diff(seq, next_);
  if (d > 0) {
    auto it = pending_.find(seq);
    if (it == pending_.end() || it->second.size() < payload.size())
      pending_[seq] = Bytes(payload.begin(), payload.end());
    // Bound memory held for gaps that never fill.
    while (pending_.size() > 256) pending_.erase(std::prev(pending_.end()));
    return 0;
  }
  const std::size_t skip = static_cast<std::size_t>(-d);
  if (skip >= payload.size()) return 0;
  append(payload.subspan(skip));
  while (!pending_.empty()) {
    auto it = pending_.begin();
    const std::int64_t gap = seq_diff(it->first, next_);
    if (gap > 0) break;
    const std::size_t off = static_cast<std::size_t>(-gap);
    if (off < it->second.size()) append(ByteView(it->second).subspan(off));
    pending_.erase(it);
  }
  return static_cast<std::size_t>(delivered_ - before);
}

bool FlowState::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

void FlowState::add_flag(const std::string& f) {
  if (!has_flag(f)) flags.push_back(f);
}

FlowState& FlowTable::lookup(const netsim::FlowKey& key, netsim::TimeUs now, bool& forward) {
  if (auto it = flows_.find(key); it != flows_.end()) {
    forward = true;
    return it->second;
  }
  if (auto it = flows_.find(key.reversed()); it != flows_.end()) {
    forward = false;
    return it->second;
  }
  forward = true;
  FlowState fresh;
  fresh.key = key;
  fresh.first_seen = now;
  fresh.forward_stream = StreamReassembler(limit_);
  fresh.reverse_stream = StreamReassembler(limit_);
  return flows_.emplace(key, std::move(fresh)).first->second;
}

const FlowState* FlowTable::find(const netsim::FlowKey& key) const {
  if (auto it = flows_.find(key); it != flows_.end()) return &it->second;
  if (auto it = flows_.find(key.reversed()); it != flows_.end()) return &it->second;
  return nullptr;
}

void BlockTable::apply(const BlockPattern& pattern, netsim::TimeUs now, netsim::TimeUs duration,
                       std::string origin) {
  const netsim::TimeUs until =
      duration > std::numeric_limits<netsim::TimeUs>::max() - now ? std::numeric_limits<netsim::TimeUs>::max()
                                                                  : now + duration;
  auto [it, inserted] = entries_.emplace(pattern, Entry{until, std::move(origin)});
  if (!inserted) it->second.until = std::max(it->second.until, until);
}

void BlockTable::apply_permanent(const BlockPattern& pattern, std::string origin) {
  entries_[pattern] = Entry{std::numeric_limits<netsim::TimeUs>::max(), std::move(origin)};
}

std::optional<std::string> BlockTable::blocked_by(const netsim::FlowKey& key, netsim::TimeUs now) {
  std::optional<std::string> origin;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (now >= it->second.until) {
      it = entries_.erase(it);
      continue;
    }
    if (!origin && it->first.matches(key)) origin = it->second.origin;
    ++it;
  }
  return origin;
}

std::optional<netsim::TimeUs> BlockTable::expiry(const BlockPattern& pattern) const {
  auto it = entries_.find(pattern);
  if (it == entries_.end()) return std::nullopt;
  return it->second.until;
}

}  // namespace tt::censor
