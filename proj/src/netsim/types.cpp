#include "tt/netsim/types.hpp"

#include <charconv>

namespace tt::netsim {

std::string format_address(Address a) {
  return std::to_string(a >> 24) + "." + std::to_string((a >> 16) & 0xff) + "." +
         std::to_string((a >> 8) & 0xff) + "." + std::to_string(a & 0xff);
}

std::optional<Address> parse_address(std::string_view s) {
  Address out = 0;
  const char* p = s.data();
  const char* end = s.data() + s.size();
  for (int i = 0; i < 4; ++i) {
    unsigned octet = 0;
    auto [next, ec] = std::from_chars(p, end, octet);
    if (ec != std::errc() || octet > 255 || next == p) return std::nullopt;
    out = (out << 8) | octet;
    p = next;
    if (i < 3) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
  }
  if (p != end) return std::nullopt;
  return out;
}

std::string FlowKey::str() const {
  return format_address(src_addr) + ":" + std::to_string(src_port) + ">" + format_address(dst_addr) +
         ":" + std::to_string(dst_port);
}

std::size_t FlowKeyHash::operator()(const FlowKey& k) const noexcept {
  std::uint64_t a = (static_cast<std::uint64_t>(k.src_addr) << 32) | k.dst_addr;
  std::uint64_t b = (static_cast<std::uint64_t>(k.src_port) << 16) | k.dst_port;
  a ^= b * 0x9e3779b97f4a7c15ULL;
  a ^= a >> 29;
  return std::hash<std::uint64_t>{}(a);
}

std::string_view to_string(PacketKind k) {
  switch (k) {
    case PacketKind::data: return "data";
    case PacketKind::rst: return "rst";
    case PacketKind::handshake: return "handshake";
  }
  return "?";
}

}  // namespace tt::netsim
