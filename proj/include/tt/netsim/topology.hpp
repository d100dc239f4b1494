#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tt::netsim {

enum class HopRole { router, censor, deflector };

struct LinkSpec {
  double latency_ms = 5.0;
  double loss = 0.0;
  double bandwidth = 1.25e6;  // bytes per second
};

// Ordered hops between the client side and the destination side. Position 0
// is the client edge, positions 1..hops.size() are the hops, and the last
// position is the destination edge. links[i] joins position i and i+1.
struct Topology {
  std::vector<HopRole> hops;
  std::vector<LinkSpec> links;

  // router -> censor -> router (or deflector), four identical links.
  static Topology canonical(bool with_deflector = false, LinkSpec link = {});
  // A single link and no hops.
  static Topology direct(LinkSpec link = {});

  // Empty when valid, otherwise the reason.
  std::optional<std::string> validate() const;

  std::optional<std::size_t> censor_position() const;
  std::optional<std::size_t> deflector_position() const;
  std::size_t edge_position() const { return hops.size() + 1; }
};

}  // namespace tt::netsim
