#include "tt/transports/mux.hpp"

#include <boost/crc.hpp>

namespace tt::transports {

std::uint32_t frame_checksum(std::uint16_t stream, std::uint32_t seq, ByteView payload) {
  Bytes header;
  put_u16(header, stream);
  put_u32(header, seq);
  put_u16(header, static_cast<std::uint16_t>(payload.size()));
  boost::crc_32_type crc;
  crc.process_bytes(header.data(), header.size());
  crc.process_bytes(payload.data(), payload.size());
  return crc.checksum();
}

Bytes encode_frame(const Frame& f) {
  Bytes out;
  out.reserve(kFrameHeader + f.payload.size());
  put_u16(out, f.stream);
  put_u32(out, f.seq);
  put_u16(out, static_cast<std::uint16_t>(f.payload.size()));
  put_u32(out, frame_checksum(f.stream, f.seq, f.payload));
  append(out, f.payload);
  return out;
}

std::optional<ParsedFrame> parse_frame(ByteView data) {
  if (data.size() < kFrameHeader) return std::nullopt;
  const std::size_t len = get_u16(data.subspan(6, 2));
  if (data.size() < kFrameHeader + len) return std::nullopt;
  ParsedFrame out;
  out.frame.stream = get_u16(data);
  out.frame.seq = get_u32(data.subspan(2, 4));
  out.frame.payload.assign(data.begin() + kFrameHeader, data.begin() + static_cast<std::ptrdiff_t>(kFrameHeader + len));
  out.size = kFrameHeader + len;
  out.checksum_ok = get_u32(data.subspan(8, 4)) == frame_checksum(out.frame.stream, out.frame.seq, out.frame.payload);
  return out;
}

std::vector<Frame> mux_frame(std::uint16_t stream, ByteView data, std::uint32_t& next_seq, std::size_t max_payload) {
  std::vector<Frame> out;
  if (data.empty()) return out;
  for (std::size_t pos = 0; pos < data.size(); pos += max_payload) {
    const auto chunk = data.subspan(pos, std::min(max_payload, data.size() - pos));
    out.push_back(Frame{stream, next_seq++, Bytes(chunk.begin(), chunk.end())});
  }
  return out;
}

Result<void, LayerError> Reassembler::push(Frame f) {
  StreamState& s = streams_[f.stream];
  const std::uint32_t ahead = f.seq - s.next;  // wraps for stale frames
  if (f.seq < s.next) return {};
  if (ahead >= kReorderWindow)
    return fail(make_error(ErrorKind::integrity, "frame sequence gap beyond reorder window"));
  s.early.emplace(f.seq, std::move(f.payload));
  for (auto it = s.early.find(s.next); it != s.early.end(); it = s.early.find(s.next)) {
    append(s.ready, it->second);
    s.early.erase(it);
    ++s.next;
  }
  return {};
}

Bytes Reassembler::take(std::uint16_t stream) {
  auto it = streams_.find(stream);
  if (it == streams_.end()) return {};
  Bytes out = std::move(it->second.ready);
  it->second.ready.clear();
  return out;
}

std::size_t Reassembler::held() const {
  std::size_t n = 0;
  for (const auto& [id, s] : streams_) n += s.early.size();
  return n;
}

Bytes MuxLayer::encode(ByteView data) {
  Bytes out;
  for (const Frame& f : mux_frame(stream_, data, next_seq_, max_payload_)) append(out, encode_frame(f));
  return out;
}

Result<Bytes, LayerError> MuxLayer::decode(ByteView data) {
  append(buf_, data);
  std::size_t pos = 0;
  while (auto parsed = parse_frame(ByteView(buf_).subspan(pos))) {
    pos += parsed->size;
    if (!parsed->checksum_ok) {
      ++integrity_failures_;
      continue;
    }
    auto r = reassembler_.push(std::move(parsed->frame));
    if (!r) return fail(r.error());
  }
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos));
  return reassembler_.take(stream_);
}

}  // namespace tt::transports
