#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "tt/util/bytes.hpp"

namespace tt::netsim {

// Virtual time in microseconds.
using TimeUs = std::uint64_t;

constexpr TimeUs kMicrosPerSecond = 1'000'000;
constexpr std::size_t kMtu = 1500;
constexpr int kDefaultTtl = 64;

constexpr TimeUs from_seconds(double s) { return static_cast<TimeUs>(s * 1e6 + 0.5); }
constexpr TimeUs from_ms(double ms) { return static_cast<TimeUs>(ms * 1e3 + 0.5); }
constexpr double to_seconds(TimeUs t) { return static_cast<double>(t) / 1e6; }
constexpr double to_ms(TimeUs t) { return static_cast<double>(t) / 1e3; }

using Address = std::uint32_t;

std::string format_address(Address a);
std::optional<Address> parse_address(std::string_view s);

struct FlowKey {
  Address src_addr = 0;
  std::uint16_t src_port = 0;
  Address dst_addr = 0;
  std::uint16_t dst_port = 0;

  FlowKey reversed() const { return {dst_addr, dst_port, src_addr, src_port}; }
  std::string str() const;

  auto operator<=>(const FlowKey&) const = default;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& k) const noexcept;
};

enum class PacketKind : std::uint8_t { data, rst, handshake };

std::string_view to_string(PacketKind k);

struct Packet {
  std::uint64_t id = 0;  // assigned by the simulator on injection
  FlowKey key;
  Bytes payload;
  int ttl = kDefaultTtl;
  PacketKind kind = PacketKind::data;
  std::uint32_t seq = 0;  // byte offset of payload in the sender's stream
  std::uint32_t ack = 0;  // next byte expected from the peer
  TimeUs send_time = 0;
  // Set by a deflecting router: the destination the sender addressed.
  std::optional<Address> deflected_from;

  // Bytes charged against link capacity: payload plus a fixed header.
  std::size_t wire_size() const { return payload.size() + 40; }
};

}  // namespace tt::netsim
