#include "tt/core/layer.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "tt/util/crypto.hpp"

namespace tt {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::handshake: return "handshake";
    case ErrorKind::integrity: return "integrity";
    case ErrorKind::transport: return "transport";
    case ErrorKind::closed: return "closed";
  }
  return "?";
}

std::string LayerError::message() const {
  std::string out(to_string(kind));
  out += " error";
  if (layer_index) out += " at layer " + std::to_string(*layer_index);
  if (!rule.empty()) out += " [" + rule + "]";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

std::ostream& operator<<(std::ostream& os, const LayerError& e) { return os << e.message(); }

std::string_view short_name(LayerKind k) {
  switch (k) {
    case LayerKind::session_init: return "SI";
    case LayerKind::encryption: return "ENC";
    case LayerKind::multiplexing: return "MUX";
    case LayerKind::content_obfuscation: return "OBF";
    case LayerKind::timing_length: return "TIMLEN";
    case LayerKind::transport: return "TRN";
  }
  return "?";
}

std::string_view long_name(LayerKind k) {
  switch (k) {
    case LayerKind::session_init: return "SessionInit";
    case LayerKind::encryption: return "Encryption";
    case LayerKind::multiplexing: return "Multiplexing";
    case LayerKind::content_obfuscation: return "ContentObfuscation";
    case LayerKind::timing_length: return "TimingLengthObfuscation";
    case LayerKind::transport: return "Transport";
  }
  return "?";
}

namespace {
bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}
}  // namespace

std::optional<LayerKind> parse_layer_kind(std::string_view s) {
  for (LayerKind k : kAllLayerKinds)
    if (iequals(s, short_name(k)) || iequals(s, long_name(k))) return k;
  if (iequals(s, "TIM-LEN")) return LayerKind::timing_length;
  return std::nullopt;
}

std::string_view to_string(Role r) { return r == Role::client ? "client" : "server"; }

std::string LayerSpec::str() const {
  std::string out(short_name(kind));
  out += ':';
  out += impl;
  if (!params.empty()) {
    out += '{';
    bool first = true;
    for (const auto& [k, v] : params) {
      if (!first) out += ',';
      first = false;
      out += k + '=' + v;
    }
    out += '}';
  }
  return out;
}

SessionKeys static_session_keys(Role role) {
  static const Bytes ikm = to_bytes("tweakable-transports static record keys");
  auto derive = [](std::string_view label) { return crypto::hkdf(ikm, {}, label, crypto::kAeadKeySize); };
  const Bytes c2s = derive("c2s data"), s2c = derive("s2c data");
  const Bytes c2s_len = derive("c2s length"), s2c_len = derive("s2c length");
  if (role == Role::client) return {c2s, s2c, c2s_len, s2c_len};
  return {s2c, c2s, s2c_len, c2s_len};
}

}  // namespace tt
