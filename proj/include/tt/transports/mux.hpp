#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tt/core/layer.hpp"

namespace tt::transports {

// stream-id(2) | seq(4) | length(2) | crc32(4) | payload
constexpr std::size_t kFrameHeader = 12;
constexpr std::size_t kReorderWindow = 1024;

struct Frame {
  std::uint16_t stream = 0;
  std::uint32_t seq = 0;
  Bytes payload;
  bool operator==(const Frame&) const = default;
};

std::uint32_t frame_checksum(std::uint16_t stream, std::uint32_t seq, ByteView payload);
Bytes encode_frame(const Frame& f);

struct ParsedFrame {
  Frame frame;
  std::size_t size = 0;  // bytes consumed
  bool checksum_ok = true;
};
// nullopt until a whole frame is available.
std::optional<ParsedFrame> parse_frame(ByteView data);

// Cuts `data` into frames on one stream, continuing from `next_seq`.
std::vector<Frame> mux_frame(std::uint16_t stream, ByteView data, std::uint32_t& next_seq,
                             std::size_t max_payload);

// Restores per-stream order from frames arriving in any order.
class Reassembler {
 public:
  // Errors when a frame lies beyond the reorder window.
  Result<void, LayerError> push(Frame f);
  Bytes take(std::uint16_t stream);
  std::size_t held() const;

 private:
  struct StreamState {
    std::uint32_t next = 0;
    std::map<std::uint32_t, Bytes> early;
    Bytes ready;
  };
  std::map<std::uint16_t, StreamState> streams_;
};

class MuxLayer : public StreamLayer {
 public:
  explicit MuxLayer(std::size_t max_payload = 1400, std::uint16_t stream = 0)
      : max_payload_(max_payload), stream_(stream) {}

  Bytes encode(ByteView data) override;
  Result<Bytes, LayerError> decode(ByteView data) override;
  std::uint64_t integrity_failures() const override { return integrity_failures_; }
  std::size_t buffered() const override { return buf_.size(); }

 private:
  std::size_t max_payload_;
  std::uint16_t stream_;
  std::uint32_t next_seq_ = 0;
  Bytes buf_;
  Reassembler reassembler_;
  std::uint64_t integrity_failures_ = 0;
};

}  // namespace tt::transports
