#include "tt/harness/background.hpp"

#include <algorithm>
#include <memory>

namespace tt::harness {

namespace {

constexpr std::string_view kBodyWords[] = {
    "the ", "news ", "weather ", "today ", "sports ", "and ", "local ", "market ", "report ", "with ",
    "photos ", "video ", "of ", "city ", "council ", "meeting ", "<p>", "</p>\n", "<div class=\"item\">", "</div>\n",
};

constexpr char kTokenAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

Bytes request(Rng& rng, std::size_t size, std::size_t flow) {
  std::string r = "GET /article/" + std::to_string(flow) + ".html HTTP/1.1\r\nHost: www.example.com\r\n"
                  "User-Agent: Mozilla/5.0\r\nAccept: text/html\r\nCookie: session=";
  while (r.size() + 4 < size) r.push_back(kTokenAlphabet[rng.uniform(0, 63)]);
  r += "\r\n\r\n";
  return to_bytes(r);
}

Bytes body(Rng& rng, std::size_t size) {
  std::string b;
  while (b.size() < size) b += kBodyWords[rng.uniform(0, std::size(kBodyWords) - 1)];
  b.resize(size);
  return to_bytes(b);
}

}  // namespace

bool is_background_client(netsim::Address a) { return (a & 0xFFFF0000u) == kBackgroundClientBase; }

std::vector<BackgroundFlow> gen_background(const transports::TraceModel& model, std::size_t n,
                                           std::size_t packets_per_flow, double spread_s, std::uint64_t seed) {
  std::vector<BackgroundFlow> out;
  out.reserve(n);
  Rng rng(seed);
  auto sampler = model.sampler();
  for (std::size_t i = 0; i < n; ++i) {
    BackgroundFlow f;
    const auto client = kBackgroundClientBase + static_cast<netsim::Address>(i + 1);
    f.key = {client, static_cast<std::uint16_t>(30000 + i % 20000), kBackgroundServer, kBackgroundPort};
    f.start = netsim::from_seconds(rng.uniform_real(0, std::max(0.0, spread_s)));
    for (std::size_t k = 0; k < packets_per_flow; ++k) {
      const auto len = static_cast<std::size_t>(sampler.length(rng));
      if (k == 0) {
        f.payloads.push_back(request(rng, std::max<std::size_t>(len, 160), i));
      } else {
        f.payloads.push_back(body(rng, len));
        f.gaps.push_back(sampler.gap(rng));
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

void schedule_background(netsim::Simulator& sim, const std::vector<BackgroundFlow>& flows) {
  if (flows.empty()) return;
  if (sim.node(kBackgroundServer) == nullptr) {
    auto& server = sim.add_node(netsim::Side::destination, kBackgroundServer);
    server.bind(kBackgroundPort, [](const netsim::Packet&) {});
  }
  for (const auto& f : flows) {
    netsim::Node* node = sim.node(f.key.src_addr);
    if (node == nullptr) node = &sim.add_node(netsim::Side::client, f.key.src_addr);
    netsim::TimeUs at = f.start;
    std::uint32_t seq = 0;
    for (std::size_t k = 0; k < f.payloads.size(); ++k) {
      if (k > 0) at += f.gaps[k - 1];
      auto p = std::make_shared<netsim::Packet>();
      p->key = f.key;
      p->payload = f.payloads[k];
      p->kind = k == 0 ? netsim::PacketKind::handshake : netsim::PacketKind::data;
      p->seq = seq;
      seq += static_cast<std::uint32_t>(p->payload.size());
      sim.schedule_at(at, [node, p] { node->send(*p); });
    }
  }
}

}  // namespace tt::harness
