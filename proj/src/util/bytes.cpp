#include "tt/util/bytes.hpp"

#include <algorithm>
#include <functional>
#include <iterator>

#include <boost/algorithm/hex.hpp>

namespace tt {

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint16_t get_u16(ByteView b) { return static_cast<std::uint16_t>((b[0] << 8) | b[1]); }

std::uint32_t get_u32(ByteView b) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(ByteView b) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
  return v;
}

std::string to_hex(ByteView b) {
  std::string out;
  out.reserve(b.size() * 2);
  boost::algorithm::hex_lower(b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::optional<Bytes> from_hex(std::string_view s) {
  Bytes out;
  out.reserve(s.size() / 2);
  try {
    boost::algorithm::unhex(s.begin(), s.end(), std::back_inserter(out));
  } catch (const boost::algorithm::hex_decode_error&) {
    return std::nullopt;
  }
  return out;
}

std::optional<std::size_t> find(ByteView haystack, ByteView needle) {
  if (needle.empty()) return 0;
  auto it = std::search(haystack.begin(), haystack.end(),
                        std::boyer_moore_horspool_searcher(needle.begin(), needle.end()));
  if (it == haystack.end()) return std::nullopt;
  return static_cast<std::size_t>(it - haystack.begin());
}

}  // namespace tt
