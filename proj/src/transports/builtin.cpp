#include "tt/transports/builtin.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "tt/transports/aead.hpp"
#include "tt/transports/decoy.hpp"
#include "tt/transports/format_template.hpp"
#include "tt/transports/mux.hpp"
#include "tt/transports/shaping.hpp"
#include "tt/transports/sim_transport.hpp"
#include "tt/transports/ticket.hpp"
#include "tt/transports/uniform_dh.hpp"

namespace tt::transports {

using param::get_bool;
using param::get_real;
using param::get_string;
using param::get_uint;

Result<std::shared_ptr<const TraceModel>, TraceError> cached_trace(const std::string& path, std::size_t min_rows) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::size_t>, std::shared_ptr<const TraceModel>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(path, min_rows);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto model = TraceModel::load(path, TraceOptions{min_rows});
  if (!model) return fail(model.error());
  auto shared = std::make_shared<const TraceModel>(std::move(*model));
  cache.emplace(key, shared);
  return shared;
}

namespace {

bool trace_loads(std::string_view path) { return cached_trace(std::string(path), 1).has_value(); }

PaddingMode padding_of(const Params& p) {
  return parse_padding_mode(get_string(p, "padding", "random")).value_or(PaddingMode::random);
}

ParamSpec padding_param() {
  return {"padding", "padding bytes: random, zero or ascii", param::one_of({"random", "zero", "ascii"})};
}

SimTransportOptions transport_options(const Params& p) {
  SimTransportOptions o;
  if (p.count("hop_lo") != 0 || p.count("hop_hi") != 0) {
    const auto lo = static_cast<std::uint16_t>(get_uint(p, "hop_lo", 2000));
    const auto hi = static_cast<std::uint16_t>(get_uint(p, "hop_hi", lo));
    o.ports = PortPolicy::hopping(get_uint(p, "hop_seed", 0), lo, std::max(lo, hi));
  } else {
    o.ports = PortPolicy::fixed_port(static_cast<std::uint16_t>(get_uint(p, "port", 9443)));
  }
  o.mss = get_uint(p, "mss", netsim::kMtu);
  o.window = get_uint(p, "window", 64);
  o.ttl = static_cast<int>(get_uint(p, "ttl", netsim::kDefaultTtl));
  o.ignore_rst = get_bool(p, "ignore_rst", false);
  o.ttl_rst = get_bool(p, "ttl_rst", false);
  o.ttl_rst_value = static_cast<int>(get_uint(p, "ttl_rst_value", 2));
  return o;
}

Registry build() {
  Registry r;

  r.add({LayerKind::session_init, "uniform_dh", "anonymous Diffie-Hellman with uniformly random wire encoding", {},
         [](const LayerSpec&, const LayerContext& ctx) -> LayerInstance {
           return std::make_unique<UniformDhLayer>(ctx.role, ctx.seed);
         },
         {}});

  r.add({LayerKind::session_init, "ticket", "single-use ticket redemption; silent to unauthenticated peers",
         {{"lifetime", "ticket lifetime in seconds", param::uint_range(1, 1u << 31)},
          {"padding", "maximum random padding per handshake message", param::uint_range(0, 1024)}},
         [](const LayerSpec& s, const LayerContext& ctx) -> LayerInstance {
           TicketLayer::Options o;
           o.lifetime_s = get_uint(s.params, "lifetime", 3600);
           o.max_padding = get_uint(s.params, "padding", 256);
           return std::make_unique<TicketLayer>(ctx, o);
         },
         {}});

  r.add({LayerKind::session_init, "decoy", "uniform DH behind a tagged nonce for deflecting routers", {},
         [](const LayerSpec&, const LayerContext& ctx) -> LayerInstance {
           Bytes key = ctx.secrets != nullptr ? ctx.secrets->deflection_key : Bytes{};
           return std::make_unique<DecoyLayer>(ctx.role, ctx.seed, std::move(key));
         },
         {}});

  r.add({LayerKind::encryption, "aead", "ChaCha20-Poly1305 records with masked lengths",
         {{"record", "maximum plaintext bytes per record", param::uint_range(1, kMaxRecord)}},
         [](const LayerSpec& s, const LayerContext&) -> LayerInstance {
           return std::make_unique<AeadLayer>(get_uint(s.params, "record", kMaxRecord));
         },
         {}});

  r.add({LayerKind::multiplexing, "frame", "sequenced, checksummed frames",
         {{"frame", "maximum payload bytes per frame", param::uint_range(1, 65535)},
          {"stream", "stream id carrying channel data", param::uint_range(0, 65535)}},
         [](const LayerSpec& s, const LayerContext&) -> LayerInstance {
           return std::make_unique<MuxLayer>(get_uint(s.params, "frame", 1400),
                                             static_cast<std::uint16_t>(get_uint(s.params, "stream", 0)));
         },
         {}});

  r.add({LayerKind::content_obfuscation, "http", "payload carried in HTTP request paths, cookies and bodies",
         {{"encoding", "token alphabet: hex or base64", param::one_of({"hex", "base64"})},
          {"host", "Host header value", param::any()}},
         [](const LayerSpec& s, const LayerContext& ctx) -> LayerInstance {
           FormatTemplate t;
           t.encoding = get_string(s.params, "encoding", "hex") == "base64" ? TokenEncoding::base64 : TokenEncoding::hex;
           t.host = get_string(s.params, "host", t.host);
           return std::make_unique<HttpObfsLayer>(ctx.role, t);
         },
         {}});

  r.add({LayerKind::timing_length, "iid", "lengths and gaps drawn from seeded random discrete distributions",
         {{"seed", "distribution seed", param::is_uint},
          {"len_min", "smallest length", param::uint_range(1, netsim::kMtu)},
          {"len_max", "largest length", param::uint_range(1, netsim::kMtu)},
          {"gap_min_ms", "smallest gap", param::is_real},
          {"gap_max_ms", "largest gap", param::is_real},
          {"bins", "maximum distinct values per distribution", param::uint_range(1, 1000)},
          {"length", "fixed packet length", param::uint_range(1, netsim::kMtu)},
          {"gap_ms", "fixed gap", param::is_real},
          padding_param()},
         [](const LayerSpec& s, const LayerContext& ctx) -> LayerInstance {
           IidParams p;
           p.seed = get_uint(s.params, "seed", 1);
           p.length_min = static_cast<int>(get_uint(s.params, "len_min", 100));
           p.length_max = static_cast<int>(get_uint(s.params, "len_max", netsim::kMtu));
           p.gap_min_ms = get_real(s.params, "gap_min_ms", 0);
           p.gap_max_ms = get_real(s.params, "gap_max_ms", 25);
           p.max_bins = get_uint(s.params, "bins", 30);
           if (s.params.count("length")) p.fixed_length = static_cast<int>(get_uint(s.params, "length", 0));
           if (s.params.count("gap_ms")) p.fixed_gap_ms = get_real(s.params, "gap_ms", 0);
           return std::make_unique<PacketShaper>(iid_sampler(p), padding_of(s.params), ctx.seed);
         },
         {}});

  r.add({LayerKind::timing_length, "trace", "lengths and gaps sampled from a recorded trace",
         {{"trace", "path to a length,iat_ms CSV file", trace_loads},
          {"min_rows", "rows the trace must contain", param::is_uint},
          padding_param()},
         [](const LayerSpec& s, const LayerContext& ctx) -> LayerInstance {
           auto model = cached_trace(get_string(s.params, "trace", ""), get_uint(s.params, "min_rows", 100));
           if (!model) throw std::runtime_error("trace shaping cannot start: " + model.error().message);
           return std::make_unique<PacketShaper>((*model)->sampler(), padding_of(s.params), ctx.seed);
         },
         {}});

  r.add({LayerKind::transport, "sim", "reliable ordered segments over the simulated network",
         {{"port", "destination port", param::uint_range(1, 65535)},
          {"hop_lo", "first port of the hopping range", param::uint_range(1, 65535)},
          {"hop_hi", "last port of the hopping range", param::uint_range(1, 65535)},
          {"hop_seed", "seed shared by both ends for the hop schedule", param::is_uint},
          {"ignore_rst", "drop reset packets instead of honouring them", param::is_bool},
          {"ttl_rst", "send a low-TTL reset after the opening packet", param::is_bool},
          {"ttl_rst_value", "TTL of that reset", param::uint_range(1, 255)},
          {"ttl", "TTL of outgoing packets", param::uint_range(1, 255)},
          {"mss", "largest segment payload", param::uint_range(64, netsim::kMtu)},
          {"window", "segments in flight", param::uint_range(1, 4096)}},
         [](const LayerSpec& s, const LayerContext& ctx) -> LayerInstance {
           return std::make_unique<SimTransport>(ctx, transport_options(s.params));
         },
         [](const LayerSpec& s) { return transport_options(s.params).ports.listen_ports(); }});

  return r;
}

}  // namespace

const Registry& builtin_registry() {
  static const Registry registry = build();
  return registry;
}

}  // namespace tt::transports
