#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tt {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

Bytes to_bytes(std::string_view s);
std::string to_string(ByteView b);

inline void append(Bytes& out, ByteView b) { out.insert(out.end(), b.begin(), b.end()); }

// Big-endian integer codecs. The get_* functions expect enough bytes.
void put_u16(Bytes& out, std::uint16_t v);
void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);
std::uint16_t get_u16(ByteView b);
std::uint32_t get_u32(ByteView b);
std::uint64_t get_u64(ByteView b);

std::string to_hex(ByteView b);
std::optional<Bytes> from_hex(std::string_view s);

// Index of the first occurrence of needle in haystack, if any.
std::optional<std::size_t> find(ByteView haystack, ByteView needle);

}  // namespace tt
