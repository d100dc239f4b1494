#pragma once

#include <vector>

#include "tt/netsim/simulator.hpp"
#include "tt/transports/trace_model.hpp"

namespace tt::harness {

inline constexpr netsim::Address kBackgroundServer = (93u << 24) | (184u << 16) | (216u << 8) | 34u;
inline constexpr std::uint16_t kBackgroundPort = 80;
inline constexpr netsim::Address kBackgroundClientBase = (10u << 24) | (1u << 16);  // 10.1.0.0

// One benign client-to-server flow: an HTTP-like request followed by
// ASCII body packets, sized and spaced by the trace model.
struct BackgroundFlow {
  netsim::FlowKey key;
  netsim::TimeUs start = 0;
  std::vector<Bytes> payloads;
  std::vector<netsim::TimeUs> gaps;  // before each payload after the first
};

std::vector<BackgroundFlow> gen_background(const transports::TraceModel& model, std::size_t n,
                                           std::size_t packets_per_flow, double spread_s, std::uint64_t seed);

bool is_background_client(netsim::Address a);

// Adds client nodes and the shared server, then schedules every send.
void schedule_background(netsim::Simulator& sim, const std::vector<BackgroundFlow>& flows);

}  // namespace tt::harness
