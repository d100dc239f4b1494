#include "tt/netsim/topology.hpp"

namespace tt::netsim {

Topology Topology::canonical(bool with_deflector, LinkSpec link) {
  Topology t;
  t.hops = {HopRole::router, HopRole::censor, with_deflector ? HopRole::deflector : HopRole::router};
  t.links.assign(4, link);
  return t;
}

Topology Topology::direct(LinkSpec link) {
  Topology t;
  t.links.assign(1, link);
  return t;
}

std::optional<std::string> Topology::validate() const {
  if (links.size() != hops.size() + 1)
    return "expected " + std::to_string(hops.size() + 1) + " links for " +
           std::to_string(hops.size()) + " hops, got " + std::to_string(links.size());
  int censors = 0;
  int deflectors = 0;
  std::optional<std::size_t> censor_at;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    if (hops[i] == HopRole::censor) {
      ++censors;
      censor_at = i;
    }
    if (hops[i] == HopRole::deflector) ++deflectors;
  }
  if (censors > 1) return "censor occupies more than one hop";
  if (deflectors > 1) return "more than one deflecting router";
  for (std::size_t i = 0; i < hops.size(); ++i) {
    if (hops[i] == HopRole::deflector && censor_at && i < *censor_at)
      return "deflecting router must sit after the censor";
  }
  for (const auto& l : links) {
    if (l.latency_ms < 0) return "negative link latency";
    if (l.loss < 0 || l.loss > 1) return "link loss outside [0,1]";
    if (l.bandwidth <= 0) return "link bandwidth must be positive";
  }
  return std::nullopt;
}

std::optional<std::size_t> Topology::censor_position() const {
  for (std::size_t i = 0; i < hops.size(); ++i)
    if (hops[i] == HopRole::censor) return i + 1;
  return std::nullopt;
}

std::optional<std::size_t> Topology::deflector_position() const {
  for (std::size_t i = 0; i < hops.size(); ++i)
    if (hops[i] == HopRole::deflector) return i + 1;
  return std::nullopt;
}

}  // namespace tt::netsim
