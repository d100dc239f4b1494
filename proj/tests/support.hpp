#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "tt/core/endpoint.hpp"
#include "tt/harness/stacks.hpp"
#include "tt/netsim/simulator.hpp"
#include "tt/transports/builtin.hpp"
#include "tt/transports/ticket.hpp"

namespace tt::testing {

inline constexpr netsim::Address kClient = 0x0A000002;  // 10.0.0.2
inline constexpr netsim::Address kServer = 0xC6336407;  // 198.51.100.7

inline ValidatedStack must_stack(const std::string& layers, const std::string& name = "test") {
  auto d = parse_stack(name, layers);
  if (!d) throw std::runtime_error(d.error().message());
  auto v = validate_stack(*d, transports::builtin_registry());
  if (!v) throw std::runtime_error(v.error().message());
  return *v;
}

// Client and echo server joined by a simulator, censor slot left empty.
struct Rig {
  std::unique_ptr<netsim::Simulator> sim;
  netsim::Node* client = nullptr;
  netsim::Node* server_node = nullptr;
  std::unique_ptr<Server> server;
  ValidatedStack stack;
  Bytes master = Bytes(32, 0x5a);

  Rig(ValidatedStack s, std::uint64_t seed, netsim::Topology topo = netsim::Topology::canonical(),
      ServerApp app = echo_app())
      : stack(std::move(s)) {
    sim = std::make_unique<netsim::Simulator>(std::move(topo), seed);
    sim->log().set_enabled(false);
    client = &sim->add_node(netsim::Side::client, kClient);
    server_node = &sim->add_node(netsim::Side::destination, kServer);
    ServerConfig sc;
    sc.secrets.ticket_master_key = master;
    sc.seed = derive_seed(seed, "server");
    sc.app = std::move(app);
    server = std::make_unique<Server>(stack, *server_node, sc);
  }

  ClientConfig client_config(std::uint64_t seed) {
    ClientConfig cc;
    cc.server = kServer;
    cc.seed = seed;
    if (const LayerSpec* si = stack.find(LayerKind::session_init); si && si->impl == "ticket")
      cc.secrets.ticket = transports::ticket_authority(server->state(), master, 3600).issue(sim->now());
    return cc;
  }

  // Opens a channel, sends `data` and waits for the echo.
  Result<Bytes, LayerError> round_trip(ByteView data, std::uint64_t seed) {
    auto ch = open_channel(stack, *client, client_config(seed));
    if (!ch) return fail(ch.error());
    if (auto s = (*ch)->send(data); !s) return fail(s.error());
    auto got = recv_exact(**ch, *sim, data.size(), netsim::from_seconds(120));
    (*ch)->close();
    return got;
  }
};

// Entropy computed from scratch, as a check on the library version.
inline double reference_entropy(ByteView data) {
  double counts[256] = {};
  for (auto b : data) counts[b] += 1;
  double h = 0;
  for (double c : counts) {
    if (c == 0) continue;
    const double p = c / static_cast<double>(data.size());
    h -= p * std::log2(p);
  }
  return h;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("tt-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace tt::testing
